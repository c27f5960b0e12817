#include "cacperf/rate_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cacperf {

RateMatrix::Builder::Builder(std::size_t dimension) : dimension_(dimension), rows_(dimension) {}

RateMatrix::Builder& RateMatrix::Builder::add(std::size_t row, std::size_t col, double rate) {
  if (row >= dimension_ || col >= dimension_) {
    throw std::out_of_range("rate matrix index out of range");
  }
  if (row == col) throw std::invalid_argument("diagonal entries are derived, not added");
  if (!std::isfinite(rate) || rate < 0.0) {
    throw std::invalid_argument("transition rate must be finite and >= 0");
  }
  if (rate > 0.0) rows_[row].push_back(Entry{col, rate});
  return *this;
}

RateMatrix RateMatrix::Builder::build() && {
  RateMatrix m;
  m.row_ptr_.reserve(dimension_ + 1);
  m.row_ptr_.push_back(0);
  m.diagonal_.resize(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) {
    auto& r = rows_[i];
    std::stable_sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    double out = 0.0;
    for (std::size_t k = 0; k < r.size();) {
      std::size_t col = r[k].col;
      double sum = 0.0;
      for (; k < r.size() && r[k].col == col; ++k) sum += r[k].rate;
      m.entries_.push_back(Entry{col, sum});
      out += sum;
    }
    m.diagonal_[i] = -out;
    m.row_ptr_.push_back(m.entries_.size());
    r.clear();
    r.shrink_to_fit();
  }
  const double worst = m.max_abs_row_sum();
  if (worst > kRowSumTolerance) {
    throw std::logic_error("generator row sum " + std::to_string(worst) + " exceeds tolerance");
  }
  return m;
}

std::span<const RateMatrix::Entry> RateMatrix::row(std::size_t i) const {
  return std::span<const Entry>(entries_).subspan(row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
}

double RateMatrix::rate(std::size_t i, std::size_t j) const {
  if (i >= dimension() || j >= dimension()) throw std::out_of_range("rate matrix index out of range");
  if (i == j) return diagonal_[i];
  auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
  if (it == r.end() || it->col != j) return 0.0;
  return it->rate;
}

double RateMatrix::max_abs_row_sum() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    double s = diagonal_[i];
    for (const auto& e : row(i)) s += e.rate;
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

std::vector<double> RateMatrix::left_multiply(std::span<const double> x) const {
  if (x.size() != dimension()) throw std::invalid_argument("dimension mismatch in left_multiply");
  std::vector<double> y(dimension(), 0.0);
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (x[i] == 0.0) continue;
    y[i] += x[i] * diagonal_[i];
    for (const auto& e : row(i)) y[e.col] += x[i] * e.rate;
  }
  return y;
}

}  // namespace cacperf
