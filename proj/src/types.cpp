#include "cylfbm/types.hpp"

namespace cylfbm {

SampledFunction sample_scalar(const TimeGrid& grid, const std::function<double(double)>& f) {
  Eigen::MatrixXd v(grid.nodes_count(), 1);
  for (int j = 0; j < grid.nodes_count(); ++j) v(j, 0) = f(grid.node(j));
  return {grid, std::move(v)};
}

} // namespace cylfbm
