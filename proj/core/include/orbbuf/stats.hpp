#pragma once

#include <vector>

namespace orbbuf {

// Spearman rank correlation with average ranks for ties. Returns 0 for
// degenerate inputs (fewer than two points or zero variance).
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);

}  // namespace orbbuf
