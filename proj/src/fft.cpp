#include "mollerscat/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace moller::fft {
namespace {

// FFTW plan creation is not thread-safe; executions on distinct buffers are.
// Plans are created once per (shape, direction) with FFTW_UNALIGNED so they
// can be replayed on any caller buffer via the new-array interface.
std::mutex plan_mutex;

fftw_plan get_plan(std::size_t nx, std::size_t ny, int sign) {
    static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> cache;
    std::lock_guard lock(plan_mutex);
    auto key = std::make_tuple(nx, ny, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(nx * (ny ? ny : 1));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = ny == 0
        ? fftw_plan_dft_1d(static_cast<int>(nx), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
        : fftw_plan_dft_2d(static_cast<int>(nx), static_cast<int>(ny), buf, buf, sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

void execute(fftw_plan p, std::complex<double>* data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, buf, buf);
}

} // namespace

void forward(std::complex<double>* data, std::size_t n) {
    execute(get_plan(n, 0, FFTW_FORWARD), data);
}

void backward(std::complex<double>* data, std::size_t n) {
    execute(get_plan(n, 0, FFTW_BACKWARD), data);
}

void forward2(std::complex<double>* data, std::size_t nx, std::size_t ny) {
    execute(get_plan(nx, ny, FFTW_FORWARD), data);
}

void backward2(std::complex<double>* data, std::size_t nx, std::size_t ny) {
    execute(get_plan(nx, ny, FFTW_BACKWARD), data);
}

} // namespace moller::fft
