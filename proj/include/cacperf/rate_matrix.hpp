#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cacperf {

/// Sparse infinitesimal generator. Off-diagonal entries are stored per row
/// sorted by column; the diagonal is the negated off-diagonal row sum.
class RateMatrix {
 public:
  struct Entry {
    std::size_t col;
    double rate;
  };

  /// Accumulates transitions; duplicate (row, col) pairs are summed.
  class Builder {
   public:
    explicit Builder(std::size_t dimension);

    /// Adds `rate` to the off-diagonal entry (row, col). Zero rates are
    /// dropped; negative or non-finite rates and diagonal targets throw.
    Builder& add(std::size_t row, std::size_t col, double rate);

    RateMatrix build() &&;

   private:
    std::size_t dimension_;
    std::vector<std::vector<Entry>> rows_;
  };

  RateMatrix() = default;

  std::size_t dimension() const noexcept { return diagonal_.size(); }
  std::span<const Entry> row(std::size_t i) const;
  double diagonal(std::size_t i) const { return diagonal_[i]; }
  /// Entry (i, j), including the diagonal; zero when absent.
  double rate(std::size_t i, std::size_t j) const;
  std::size_t nonzeros() const noexcept { return entries_.size(); }

  /// max_i |sum_j q(i, j)|
  double max_abs_row_sum() const;

  /// Row vector times matrix: (x Q)_j.
  std::vector<double> left_multiply(std::span<const double> x) const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<Entry> entries_;
  std::vector<double> diagonal_;
};

inline constexpr double kRowSumTolerance = 1e-12;

}  // namespace cacperf
