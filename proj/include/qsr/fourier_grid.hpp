#pragma once

// Matrix-free Fourier operator from a uniform grid of N points t_n = n/N to
// the first L frequencies:  (F b)_k = sum_n b_n exp(-2 pi i k n / N).
// Rows of F are orthogonal with F F^* = N I whenever L <= N.

#include <memory>
#include <span>

#include "qsr/measures.hpp"

namespace qsr {

class FourierGrid {
 public:
  /// Throws ParameterError unless 1 <= frequencies <= grid_size.
  FourierGrid(int frequencies, int grid_size);
  ~FourierGrid();
  FourierGrid(FourierGrid&&) noexcept;
  FourierGrid& operator=(FourierGrid&&) noexcept;
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  int frequencies() const noexcept;
  int grid_size() const noexcept;

  /// out (length L) = F b, b of length N.
  void forward(std::span<const Complex> b, std::span<Complex> out);
  /// out (length N) = F^* r, r of length L.
  void adjoint(std::span<const Complex> r, std::span<Complex> out);

  /// Full-length unnormalized transforms on the grid:
  /// dft: out_k = sum_n x_n e^{-2 pi i k n / N};  idft: sign +.
  void dft(std::span<const Complex> x, std::span<Complex> out);
  void idft(std::span<const Complex> x, std::span<Complex> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qsr
