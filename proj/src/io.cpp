#include "elasticnet/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace elasticnet {

namespace {

std::string fmt17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string next_content_line(std::istream& in, int& line_number) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  throw ParseError("unexpected end of file", line_number);
}

}  // namespace

void write_curve(std::ostream& out, const DiscreteCurve& curve) {
  out << curve.dim() << ' ' << curve.segments() << '\n';
  for (int j = 0; j <= curve.segments(); ++j) {
    for (int c = 0; c < curve.dim(); ++c) {
      if (c) out << ' ';
      out << fmt17(curve.nodes(j, c));
    }
    out << '\n';
  }
}

DiscreteCurve read_curve(std::istream& in, int& line_number) {
  std::istringstream header(next_content_line(in, line_number));
  int n = 0, N = 0;
  if (!(header >> n >> N)) throw ParseError("curve header must be 'n N'", line_number);
  if (n < 2 || N < 1) throw ParseError("invalid curve header values", line_number);
  DiscreteCurve curve;
  curve.nodes.resize(N + 1, n);
  for (int j = 0; j <= N; ++j) {
    std::istringstream row(next_content_line(in, line_number));
    for (int c = 0; c < n; ++c) {
      if (!(row >> curve.nodes(j, c)))
        throw ParseError("expected " + std::to_string(n) + " coordinates", line_number);
    }
  }
  return curve;
}

void write_network(std::ostream& out, const Network& net) {
  out << net.dim() << ' ' << net.segments() << ' ' << fmt17(net.lambda[0]) << ' '
      << fmt17(net.lambda[1]) << ' ' << fmt17(net.lambda[2]) << '\n';
  for (const auto& curve : net.curves) write_curve(out, curve);
}

Network read_network(std::istream& in) {
  int line_number = 0;
  std::istringstream header(next_content_line(in, line_number));
  int n = 0, N = 0;
  Network net;
  if (!(header >> n >> N >> net.lambda[0] >> net.lambda[1] >> net.lambda[2]))
    throw ParseError("network header must be 'n N lambda1 lambda2 lambda3'", line_number);
  for (int i = 0; i < 3; ++i) {
    net.curves[i] = read_curve(in, line_number);
    if (net.curves[i].dim() != n || net.curves[i].segments() != N)
      throw ParseError("curve block does not match the network header", line_number);
    net.endpoints[i] = net.curves[i].nodes.row(N).transpose();
  }
  for (int i = 1; i < 3; ++i) {
    for (int c = 0; c < n; ++c) {
      if (net.curves[i].nodes(0, c) != net.curves[0].nodes(0, c))
        throw ParseError("junction nodes of the three curves do not coincide", line_number);
    }
  }
  return net;
}

Network read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_network(in);
}

void write_network_file(const std::string& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_network(out, net);
}

std::string csv_header() {
  return "t,E_total,E_1,E_2,E_3,L_1,L_2,L_3,dissipation_lhs,dissipation_rhs,det,delta,"
         "span_dim,phi1_0,phi2_0,phi3_0,el_residual,spread";
}

std::string csv_row(const DiagRecord& r) {
  std::ostringstream out;
  out << fmt17(r.t) << ',' << fmt17(r.E_total);
  for (double e : r.E) out << ',' << fmt17(e);
  for (double l : r.L) out << ',' << fmt17(l);
  out << ',' << fmt17(r.dissipation_lhs) << ',' << fmt17(r.dissipation_rhs) << ','
      << fmt17(r.det) << ',' << fmt17(r.delta) << ',' << r.span_dim;
  for (double phi : r.phi0) out << ',' << fmt17(phi);
  out << ',' << fmt17(r.el_residual) << ',' << fmt17(r.spread);
  return out.str();
}

std::string diag_json(const DiagRecord& r, const std::map<std::string, double>& residuals) {
  nlohmann::json j;
  j["t"] = r.t;
  j["E_total"] = r.E_total;
  j["E_1"] = r.E[0];
  j["E_2"] = r.E[1];
  j["E_3"] = r.E[2];
  j["L_1"] = r.L[0];
  j["L_2"] = r.L[1];
  j["L_3"] = r.L[2];
  j["dissipation_lhs"] = r.dissipation_lhs;
  j["dissipation_rhs"] = r.dissipation_rhs;
  j["det"] = r.det;
  j["delta"] = r.delta;
  j["span_dim"] = r.span_dim;
  j["phi1_0"] = r.phi0[0];
  j["phi2_0"] = r.phi0[1];
  j["phi3_0"] = r.phi0[2];
  j["el_residual"] = r.el_residual;
  j["spread"] = r.spread;
  j["residuals"] = residuals;
  return j.dump();
}

namespace {

struct BoundingBox {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  void include(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
};

void write_polyline(std::ostream& out, const std::vector<std::pair<double, double>>& pts,
                    const BoundingBox& box, const char* color) {
  const double width = 640.0, height = 480.0, pad = 20.0;
  const double sx = (width - 2 * pad) / std::max(box.xmax - box.xmin, 1e-12);
  const double sy = (height - 2 * pad) / std::max(box.ymax - box.ymin, 1e-12);
  const double scale = std::min(sx, sy);
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
  for (const auto& [x, y] : pts)
    out << pad + (x - box.xmin) * scale << ',' << height - pad - (y - box.ymin) * scale
        << ' ';
  out << "\"/>\n";
}

}  // namespace

void write_svg_traces(const std::string& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  BoundingBox box;
  for (const auto& curve : net.curves)
    for (int j = 0; j <= curve.segments(); ++j) box.include(curve.nodes(j, 0), curve.nodes(j, 1));
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n";
  const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
  for (int i = 0; i < 3; ++i) {
    std::vector<std::pair<double, double>> pts;
    for (int j = 0; j <= net.segments(); ++j)
      pts.emplace_back(net.curves[i].nodes(j, 0), net.curves[i].nodes(j, 1));
    write_polyline(out, pts, box, colors[i]);
  }
  out << "</svg>\n";
}

void write_svg_series(const std::string& path,
                      const std::vector<std::pair<double, double>>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  BoundingBox box;
  for (const auto& [x, y] : points) box.include(x, y);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n";
  write_polyline(out, points, box, "#1f77b4");
  out << "</svg>\n";
}

}  // namespace elasticnet
