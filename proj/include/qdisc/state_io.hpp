#pragma once

#include <string>

#include "qdisc/states.hpp"

namespace qdisc {

/// Raw contents of a density-matrix file:
///   { "dims": [m, n], "re": [[...]], "im": [[...]] }   (row-major, both mn x mn)
struct StateFile {
    Dims dims;
    ComplexMatrix matrix = ComplexMatrix::zeros(1, 1);
};

/// Parses the document structure only; throws Error on malformed input.
StateFile parse_state_json(const std::string &text);
StateFile read_state_file(const std::string &path);

/// Parses and validates at tol (Hermiticity, trace, positivity).
DensityMatrix load_density_matrix(const std::string &path, double tol = 1e-6);

std::string to_state_json(const ComplexMatrix &matrix, Dims dims);
void write_state_file(const std::string &path, const DensityMatrix &rho);

}  // namespace qdisc
