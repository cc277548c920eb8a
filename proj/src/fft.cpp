#include "fft.hpp"

#include <mutex>
#include <numbers>

#include "bohm/errors.hpp"

namespace bohm::detail {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};

std::shared_ptr<fftw_plan_s> make_plan(const GridGeometry& g, int sign) {
    std::lock_guard lock(planner_mutex());
    const std::size_t n = g.size();
    auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = g.dimension == 1
                         ? fftw_plan_dft_1d(int(g.points[0]), buffer, buffer, sign, flags)
                         : fftw_plan_dft_2d(int(g.points[0]), int(g.points[1]), buffer, buffer, sign, flags);
    fftw_free(buffer);
    if (plan == nullptr) throw SolverFailure("FFTW could not create a plan");
    return std::shared_ptr<fftw_plan_s>(plan, PlanDeleter{});
}

fftw_complex* as_fftw(std::span<cplx> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

Fft::Fft(const GridGeometry& geometry)
    : geometry_(geometry),
      forward_(make_plan(geometry, FFTW_FORWARD)),
      backward_(make_plan(geometry, FFTW_BACKWARD)) {}

void Fft::forward(std::span<cplx> data) const {
    fftw_execute_dft(forward_.get(), as_fftw(data), as_fftw(data));
}

void Fft::backward(std::span<cplx> data) const {
    fftw_execute_dft(backward_.get(), as_fftw(data), as_fftw(data));
}

double Fft::wavenumber(int axis, std::size_t i) const {
    const std::size_t n = geometry_.points[axis];
    const double length = geometry_.upper[axis] - geometry_.lower[axis];
    const double m = i <= n / 2 ? double(i) : double(i) - double(n);
    // The Nyquist bin is treated as positive; its sign is irrelevant for k^2.
    return 2.0 * std::numbers::pi * m / length;
}

}  // namespace bohm::detail
