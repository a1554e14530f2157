#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace gsopt {

// Dense row-major 2-d array. Nothing fancy: contiguous storage plus bounds
// asserts in debug builds.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), v_((size_t)rows * (size_t)cols, fill) {
    assert(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return v_.size(); }

  T& operator()(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return v_[(size_t)r * cols_ + c];
  }
  const T& operator()(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return v_[(size_t)r * cols_ + c];
  }

  T* row(int r) {
    assert(r >= 0 && r < rows_);
    return v_.data() + (size_t)r * cols_;
  }
  const T* row(int r) const {
    assert(r >= 0 && r < rows_);
    return v_.data() + (size_t)r * cols_;
  }
  std::span<T> row_span(int r) { return {row(r), (size_t)cols_}; }
  std::span<const T> row_span(int r) const { return {row(r), (size_t)cols_}; }

  T* data() { return v_.data(); }
  const T* data() const { return v_.data(); }

  bool operator==(const Mat&) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> v_;
};

// Dense row-major 3-d array, d0 x d1 x d2. slab(i) views the d1 x d2 slice,
// which is the per-replica unit the solver hands to workers.
template <class T>
class Cube {
 public:
  Cube() = default;
  Cube(int d0, int d1, int d2, T fill = T{})
      : d0_(d0), d1_(d1), d2_(d2), v_((size_t)d0 * d1 * d2, fill) {
    assert(d0 >= 0 && d1 >= 0 && d2 >= 0);
  }

  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }
  size_t size() const { return v_.size(); }
  size_t slab_size() const { return (size_t)d1_ * d2_; }

  T& operator()(int i, int j, int k) {
    assert(i >= 0 && i < d0_ && j >= 0 && j < d1_ && k >= 0 && k < d2_);
    return v_[((size_t)i * d1_ + j) * d2_ + k];
  }
  const T& operator()(int i, int j, int k) const {
    assert(i >= 0 && i < d0_ && j >= 0 && j < d1_ && k >= 0 && k < d2_);
    return v_[((size_t)i * d1_ + j) * d2_ + k];
  }

  T* slab(int i) {
    assert(i >= 0 && i < d0_);
    return v_.data() + (size_t)i * slab_size();
  }
  const T* slab(int i) const {
    assert(i >= 0 && i < d0_);
    return v_.data() + (size_t)i * slab_size();
  }
  std::span<T> slab_span(int i) { return {slab(i), slab_size()}; }
  std::span<const T> slab_span(int i) const { return {slab(i), slab_size()}; }

  T* data() { return v_.data(); }
  const T* data() const { return v_.data(); }

  bool same_shape(const Cube& o) const {
    return d0_ == o.d0_ && d1_ == o.d1_ && d2_ == o.d2_;
  }

  bool operator==(const Cube&) const = default;

 private:
  int d0_ = 0, d1_ = 0, d2_ = 0;
  std::vector<T> v_;
};

}  // namespace gsopt
