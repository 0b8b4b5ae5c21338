#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rdjoint {

/// Running variable (already cutoff-normalized) plus covariate columns.
struct Sample {
  std::vector<double> x;
  std::vector<std::vector<double>> z;  // z[k][i], one column per covariate
  std::vector<std::string> names;      // covariate names, same length as z

  std::size_t n() const { return x.size(); }
  std::size_t d() const { return z.size(); }
};

}  // namespace rdjoint
