#include "qsr/fourier_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "qsr/errors.hpp"

namespace qsr {

namespace {
// FFTW's planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}
}  // namespace

struct FourierGrid::Impl {
  int frequencies;
  int grid_size;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward_plan = nullptr;
  fftw_plan backward_plan = nullptr;

  Impl(int l, int n) : frequencies(l), grid_size(n) {
    std::lock_guard lock(planner_mutex());
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    forward_plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_plan);
    fftw_destroy_plan(backward_plan);
    fftw_free(in);
    fftw_free(out);
  }

  Complex* input() { return reinterpret_cast<Complex*>(in); }
  const Complex* output() const { return reinterpret_cast<const Complex*>(out); }
};

FourierGrid::FourierGrid(int frequencies, int grid_size) {
  if (frequencies < 1 || grid_size < frequencies) {
    throw ParameterError("FourierGrid: need 1 <= frequencies <= grid_size");
  }
  impl_ = std::make_unique<Impl>(frequencies, grid_size);
}

FourierGrid::~FourierGrid() = default;
FourierGrid::FourierGrid(FourierGrid&&) noexcept = default;
FourierGrid& FourierGrid::operator=(FourierGrid&&) noexcept = default;

int FourierGrid::frequencies() const noexcept { return impl_->frequencies; }
int FourierGrid::grid_size() const noexcept { return impl_->grid_size; }

void FourierGrid::forward(std::span<const Complex> b, std::span<Complex> out) {
  const auto n = static_cast<std::size_t>(impl_->grid_size);
  const auto l = static_cast<std::size_t>(impl_->frequencies);
  if (b.size() != n || out.size() != l) {
    throw DimensionError("FourierGrid::forward: size mismatch");
  }
  std::copy(b.begin(), b.end(), impl_->input());
  fftw_execute(impl_->forward_plan);
  std::copy_n(impl_->output(), l, out.begin());
}

void FourierGrid::adjoint(std::span<const Complex> r, std::span<Complex> out) {
  const auto n = static_cast<std::size_t>(impl_->grid_size);
  const auto l = static_cast<std::size_t>(impl_->frequencies);
  if (r.size() != l || out.size() != n) {
    throw DimensionError("FourierGrid::adjoint: size mismatch");
  }
  Complex* in = impl_->input();
  std::copy(r.begin(), r.end(), in);
  std::fill(in + l, in + n, Complex{0.0, 0.0});
  fftw_execute(impl_->backward_plan);
  std::copy_n(impl_->output(), n, out.begin());
}

void FourierGrid::dft(std::span<const Complex> x, std::span<Complex> out) {
  const auto n = static_cast<std::size_t>(impl_->grid_size);
  if (x.size() != n || out.size() != n) {
    throw DimensionError("FourierGrid::dft: size mismatch");
  }
  std::copy(x.begin(), x.end(), impl_->input());
  fftw_execute(impl_->forward_plan);
  std::copy_n(impl_->output(), n, out.begin());
}

void FourierGrid::idft(std::span<const Complex> x, std::span<Complex> out) {
  const auto n = static_cast<std::size_t>(impl_->grid_size);
  if (x.size() != n || out.size() != n) {
    throw DimensionError("FourierGrid::idft: size mismatch");
  }
  std::copy(x.begin(), x.end(), impl_->input());
  fftw_execute(impl_->backward_plan);
  std::copy_n(impl_->output(), n, out.begin());
}

}  // namespace qsr
