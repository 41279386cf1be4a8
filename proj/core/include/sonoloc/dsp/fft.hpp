#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sonoloc::dsp {

/// Real-input FFT of a fixed length. Forward produces n/2+1 bins; inverse is
/// unnormalized (inverse(forward(x)) == n * x), matching FFTW conventions.
/// An instance is not shareable between threads; create one per thread.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(RealFft&&) noexcept;
    RealFft& operator=(RealFft&&) noexcept;
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    std::size_t bins() const { return n_ / 2 + 1; }

    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    struct Plans;
    std::size_t n_ = 0;
    std::unique_ptr<Plans> plans_;
};

/// Magnitude-squared spectrum of a real signal (length n/2+1).
std::vector<double> power_spectrum(std::span<const double> signal);

std::size_t next_power_of_two(std::size_t n);

}  // namespace sonoloc::dsp
