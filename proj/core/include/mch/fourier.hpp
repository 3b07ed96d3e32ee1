#pragma once

#include <complex>
#include <span>

namespace mch {

/// Real-to-complex / complex-to-real DFT of one fixed size, backed by FFTW.
///
/// forward() is unnormalized, X_m = Σ_j u_j e^{−2πi mj/n} for m = 0..n/2;
/// inverse() divides by n so inverse(forward(u)) = u. Plans are created with
/// FFTW_UNALIGNED and executed through the new-array interface, so one
/// instance may be shared by concurrent callers.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  int size() const { return n_; }
  int spectrum_size() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  int n_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Per-thread cache of transforms keyed by size.
const RealFft& fft_for(int n);

}  // namespace mch
