#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace fgot {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Bad input: invalid graph data, size mismatches, unparsable specs.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numeric breakdown: eigensolver failure, lost PSD structure, diverged solver.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fgot
