#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "utl/errors.hpp"
#include "utl/scalars.hpp"

namespace utl {

/// Dense row-major matrix over a scalar backend.
template <class F>
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<F> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, F(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  F& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool is_zero() const {
    for (const F& x : data)
      if (!ScalarTraits<F>::equal(x, F(0))) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw InvalidInput("matrix shape mismatch");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t k = 0; k < a.cols; ++k) {
        const F& x = a(i, k);
        if (ScalarTraits<F>::is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.check(b);
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.check(b);
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] -= b.data[i];
    return a;
  }
  friend Matrix operator*(const F& s, Matrix a) {
    for (F& x : a.data) x *= s;
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i)
      if (!ScalarTraits<F>::equal(a.data[i], b.data[i])) return false;
    return true;
  }

  void check(const Matrix& b) const {
    if (rows != b.rows || cols != b.cols) throw InvalidInput("matrix shape mismatch");
  }
};

template <class F>
nlohmann::json matrix_to_json(const Matrix<F>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(ScalarTraits<F>::to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

/// Reduced row echelon form in place; returns the pivot columns.
/// Pivots are the first nonzero entry in column order, so the result is deterministic.
template <class F>
std::vector<std::size_t> row_reduce(Matrix<F>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && ScalarTraits<F>::is_zero(m(p, c))) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || ScalarTraits<F>::is_zero(m(i, c))) continue;
      F f = m(i, c);
      for (std::size_t j = c; j < m.cols; ++j)
        if (!ScalarTraits<F>::is_zero(m(r, j))) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  return row_reduce(m).size();
}

/// Basis of the right kernel, one vector per free column.
template <class F>
std::vector<std::vector<F>> nullspace(Matrix<F> m) {
  std::vector<std::size_t> piv = row_reduce(m);
  std::vector<bool> is_piv(m.cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<F>> out;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<F> v(m.cols, F(0));
    v[f] = F(1);
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace utl
