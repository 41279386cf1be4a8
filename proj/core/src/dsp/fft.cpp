#include "sonoloc/dsp/fft.hpp"

#include "sonoloc/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace sonoloc::dsp {
namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct RealFft::Plans {
    double* real = nullptr;
    fftw_complex* spectrum = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    explicit Plans(std::size_t n) {
        std::lock_guard lock(planner_mutex());
        real = fftw_alloc_real(n);
        spectrum = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spectrum, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum, real, FFTW_ESTIMATE);
    }
    ~Plans() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_free(real);
        fftw_free(spectrum);
    }
};

RealFft::RealFft(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidArgument("FFT length must be positive");
    plans_ = std::make_unique<Plans>(n);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (in.size() > n_ || out.size() < bins()) throw DimensionMismatch("RealFft::forward buffer size");
    std::fill(plans_->real, plans_->real + n_, 0.0);
    std::copy(in.begin(), in.end(), plans_->real);
    fftw_execute(plans_->fwd);
    const std::size_t nb = bins();
    for (std::size_t k = 0; k < nb; ++k) {
        out[k] = {plans_->spectrum[k][0], plans_->spectrum[k][1]};
    }
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    if (in.size() < bins() || out.size() < n_) throw DimensionMismatch("RealFft::inverse buffer size");
    const std::size_t nb = bins();
    for (std::size_t k = 0; k < nb; ++k) {
        plans_->spectrum[k][0] = in[k].real();
        plans_->spectrum[k][1] = in[k].imag();
    }
    // c2r destroys its input; the spectrum buffer is scratch.
    fftw_execute(plans_->inv);
    std::copy(plans_->real, plans_->real + n_, out.begin());
}

std::vector<double> power_spectrum(std::span<const double> signal) {
    RealFft fft(signal.size());
    std::vector<std::complex<double>> spec(fft.bins());
    fft.forward(signal, spec);
    std::vector<double> power(spec.size());
    std::transform(spec.begin(), spec.end(), power.begin(), [](const auto& c) { return std::norm(c); });
    return power;
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace sonoloc::dsp
