#include "clsgen/tensor.hpp"

#include "clsgen/errors.hpp"

namespace clsgen {

Tensor::Tensor(std::vector<int64_t> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
  if (shape_product(shape) != static_cast<int64_t>(data.size())) {
    throw ModelError("tensor: data size does not match shape product");
  }
}

int64_t Tensor::size() const { return shape_product(shape); }

int64_t Tensor::shape_product(const std::vector<int64_t>& s) {
  int64_t p = 1;
  for (int64_t d : s) p *= d;
  return p;
}

Tensor Tensor::from_matrix(const Eigen::MatrixXd& m) {
  Tensor t;
  t.shape = {m.rows(), m.cols()};
  t.data.resize(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data[static_cast<size_t>(r * m.cols() + c)] = m(r, c);
  return t;
}

Tensor Tensor::from_vector(const Eigen::VectorXd& v) {
  Tensor t;
  t.shape = {v.size()};
  t.data.assign(v.data(), v.data() + v.size());
  return t;
}

Eigen::MatrixXd Tensor::to_matrix() const {
  if (shape.size() != 2) throw ModelError("tensor: to_matrix requires rank 2");
  Eigen::MatrixXd m(shape[0], shape[1]);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = data[static_cast<size_t>(r * m.cols() + c)];
  return m;
}

Eigen::VectorXd Tensor::to_vector() const {
  if (shape.size() != 1) throw ModelError("tensor: to_vector requires rank 1");
  return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

}  // namespace clsgen
