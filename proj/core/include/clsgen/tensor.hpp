#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace clsgen {

// Dense row-major tensor of doubles with an explicit shape. Rank-2 views are
// the workhorse for the recurrent models; the checkpoint container stores
// arbitrary rank.
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<int64_t> s, std::vector<double> d);

  int64_t size() const;
  static int64_t shape_product(const std::vector<int64_t>& s);

  static Tensor from_matrix(const Eigen::MatrixXd& m);
  static Tensor from_vector(const Eigen::VectorXd& v);
  Eigen::MatrixXd to_matrix() const;  // requires rank 2
  Eigen::VectorXd to_vector() const;  // requires rank 1
};

}  // namespace clsgen
