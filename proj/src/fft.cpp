#include "fft.hpp"

#include <numbers>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mlnheat::detail {
namespace {

// Forward twiddles exp(-2pi i j/n), j < n/2, cached per size and thread.
const std::vector<std::complex<double>>& twiddles(int n) {
    thread_local std::unordered_map<int, std::vector<std::complex<double>>> cache;
    auto& table = cache[n];
    if (table.empty() && n >= 2) {
        table.resize(static_cast<std::size_t>(n / 2));
        for (int j = 0; j < n / 2; ++j)
            table[static_cast<std::size_t>(j)] =
                std::polar(1.0, -2.0 * std::numbers::pi * j / n);
    }
    return table;
}

} // namespace

void fft_pow2(std::complex<double>* a, int n, int sign) {
    if (n <= 1) return;
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& w = twiddles(n);
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len / 2;
        const int step = n / len;
        for (int base = 0; base < n; base += len) {
            for (int j = 0; j < half; ++j) {
                std::complex<double> tw = w[static_cast<std::size_t>(j * step)];
                if (sign > 0) tw = std::conj(tw);
                const std::complex<double> u = a[base + j];
                const std::complex<double> v = a[base + j + half] * tw;
                a[base + j] = u + v;
                a[base + j + half] = u - v;
            }
        }
    }
}

void fft_2d(std::complex<double>* a, int n, int sign) {
    for (int row = 0; row < n; ++row)
        fft_pow2(a + static_cast<std::size_t>(row) * n, n, sign);
    thread_local std::vector<std::complex<double>> col;
    col.resize(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) col[static_cast<std::size_t>(r)] = a[static_cast<std::size_t>(r) * n + c];
        fft_pow2(col.data(), n, sign);
        for (int r = 0; r < n; ++r) a[static_cast<std::size_t>(r) * n + c] = col[static_cast<std::size_t>(r)];
    }
}

} // namespace mlnheat::detail
