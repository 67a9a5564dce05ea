#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "elasticnet/flow.hpp"
#include "elasticnet/network.hpp"

namespace elasticnet {

/// Curve snapshot: header "n N", then N+1 lines of n coordinates, written
/// with 17 significant digits so read-back is bit-exact.
void write_curve(std::ostream& out, const DiscreteCurve& curve);
DiscreteCurve read_curve(std::istream& in, int& line_number);

/// Network file: header "n N lambda1 lambda2 lambda3", then three curve
/// blocks in the curve snapshot format.
void write_network(std::ostream& out, const Network& net);
Network read_network(std::istream& in);

Network read_network_file(const std::string& path);
void write_network_file(const std::string& path, const Network& net);

std::string csv_header();
std::string csv_row(const DiagRecord& record);

/// JSON object for one diagnostics sample; keys match the CSV columns, with
/// the boundary residual map nested under "residuals".
std::string diag_json(const DiagRecord& record,
                      const std::map<std::string, double>& residuals);

void write_svg_traces(const std::string& path, const Network& net);
void write_svg_series(const std::string& path,
                      const std::vector<std::pair<double, double>>& points);

}  // namespace elasticnet
