// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <utility>

namespace fhdfrc {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::NonIntegerOrthogonality: return "NonIntegerOrthogonality";
        case Errc::TooManyAntennas: return "TooManyAntennas";
        case Errc::OddL: return "OddL";
        case Errc::TooShort: return "TooShort";
        case Errc::EmptySet: return "EmptySet";
        case Errc::NotCoprime: return "NotCoprime";
        case Errc::TooFew: return "TooFew";
        case Errc::NoCoprimePair: return "NoCoprimePair";
        case Errc::FrameTooShort: return "FrameTooShort";
        case Errc::InvalidSchedule: return "InvalidSchedule";
        case Errc::PeakCollision: return "PeakCollision";
        case Errc::DivZero: return "DivZero";
        case Errc::NoConsistentTuple: return "NoConsistentTuple";
        case Errc::NeitherApplicable: return "NeitherApplicable";
        case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
        case Errc::OutOfDomain: return "OutOfDomain";
        case Errc::ProbeMissing: return "ProbeMissing";
        case Errc::NullingViolated: return "NullingViolated";
        case Errc::CompositeTooSmall: return "CompositeTooSmall";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

namespace dsp {
namespace {

// FFTW planning is not re-entrant; plans are created once per (size, sign) and
// executed through the new-array interface on fftw_malloc'ed buffers.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* in = fftw_alloc_complex(static_cast<size_t>(n));
        auto* out = fftw_alloc_complex(static_cast<size_t>(n));
        fftw_plan p = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

CVec run(std::span<const Complex> x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return {};
    fftw_plan plan = PlanCache::instance().get(n, sign);
    auto* in = fftw_alloc_complex(static_cast<size_t>(n));
    auto* out = fftw_alloc_complex(static_cast<size_t>(n));
    std::memcpy(in, x.data(), sizeof(fftw_complex) * static_cast<size_t>(n));
    fftw_execute_dft(plan, in, out);
    CVec result(static_cast<size_t>(n));
    std::memcpy(static_cast<void*>(result.data()), out, sizeof(fftw_complex) * static_cast<size_t>(n));
    fftw_free(in);
    fftw_free(out);
    return result;
}

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

CVec fft(std::span<const Complex> x) { return run(x, FFTW_FORWARD); }

CVec ifft_unscaled(std::span<const Complex> x) { return run(x, FFTW_BACKWARD); }

CVec xcorr_valid(std::span<const Complex> x, std::span<const Complex> ref) {
    if (ref.size() > x.size() || ref.empty()) return {};
    const size_t n_lags = x.size() - ref.size() + 1;
    const size_t nfft = next_pow2(x.size() + ref.size());
    CVec xa(nfft), ra(nfft);
    std::copy(x.begin(), x.end(), xa.begin());
    std::copy(ref.begin(), ref.end(), ra.begin());
    CVec X = fft(xa);
    CVec R = fft(ra);
    for (size_t i = 0; i < nfft; ++i) X[i] *= std::conj(R[i]);
    CVec r = ifft_unscaled(X);
    CVec out(n_lags);
    const double scale = 1.0 / static_cast<double>(nfft);
    for (size_t lag = 0; lag < n_lags; ++lag) out[lag] = r[lag] * scale;
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace dsp
}  // namespace fhdfrc
