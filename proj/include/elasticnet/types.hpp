#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace elasticnet {

// A point (or vector) in the ambient space R^n, n >= 2.
using Vec = Eigen::VectorXd;

// A field of vectors over the node grid: row j holds the value at node j,
// so the shape is (N+1) x n.
using NodeField = Eigen::MatrixXd;

// A per-node scalar field of length N+1.
using Scalars = Eigen::VectorXd;

struct DegenerateCurve : std::runtime_error {
  explicit DegenerateCurve(const std::string& what) : std::runtime_error(what) {}
};

struct OrderTooHigh : std::runtime_error {
  explicit OrderTooHigh(const std::string& what) : std::runtime_error(what) {}
};

struct NonUnitTangent : std::runtime_error {
  explicit NonUnitTangent(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateJunction : std::runtime_error {
  explicit DegenerateJunction(const std::string& what) : std::runtime_error(what) {}
};

struct LinearSolveFailure : std::runtime_error {
  explicit LinearSolveFailure(const std::string& what) : std::runtime_error(what) {}
};

struct StepRejected : std::runtime_error {
  explicit StepRejected(const std::string& what) : std::runtime_error(what) {}
};

struct BlowUp : std::runtime_error {
  explicit BlowUp(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleGeometry : std::runtime_error {
  explicit InfeasibleGeometry(const std::string& what) : std::runtime_error(what) {}
};

struct ProjectionFailed : std::runtime_error {
  explicit ProjectionFailed(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  int line;
};

}  // namespace elasticnet
