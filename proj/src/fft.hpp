#pragma once

#include <fftw3.h>

#include <memory>
#include <span>

#include "bohm/grid.hpp"

namespace bohm::detail {

/// In-place complex FFT over a 1D/2D grid (row-major, x slowest).  Plans are
/// created unaligned so one instance can transform any buffer, and executing
/// is safe from several threads at once.  The backward transform is not
/// normalized.
class Fft {
public:
    explicit Fft(const GridGeometry& geometry);

    void forward(std::span<cplx> data) const;
    void backward(std::span<cplx> data) const;

    /// Angular wavenumber of FFT bin `i` on `axis`.
    double wavenumber(int axis, std::size_t i) const;

private:
    GridGeometry geometry_;
    std::shared_ptr<fftw_plan_s> forward_;
    std::shared_ptr<fftw_plan_s> backward_;
};

}  // namespace bohm::detail
