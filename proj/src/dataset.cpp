#include "hypembed/dataset.hpp"

#include <cmath>
#include <string>

#include "hypembed/errors.hpp"

namespace hypembed {

void Dataset::validate() const {
  if (has_labels() && labels.size() != size()) {
    throw DataError("dataset '" + name + "' has " + std::to_string(size()) + " points but " +
                    std::to_string(labels.size()) + " labels");
  }
  for (double c : points.data()) {
    if (!std::isfinite(c)) throw DataError("dataset '" + name + "' has non-finite coordinates");
  }
}

void Dataset::validate_in_ball() const {
  validate();
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(squared_norm(point(i)) < 1.0)) {
      throw GeometryError("point " + std::to_string(i) + " of '" + name +
                          "' is not strictly inside the unit ball");
    }
  }
}

std::vector<double> row_squared_norms(const Matrix& points) {
  std::vector<double> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = squared_norm(points.row(i));
  return out;
}

}  // namespace hypembed
