#include "transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace nlpm::detail {
namespace {

// fftw planning is not thread-safe; execution of an existing plan on new arrays is.
class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(fftw_r2r_kind kind, std::size_t size)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(static_cast<int>(kind), size);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<double> in(size), out(size);
        fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(size), in.data(), out.data(), kind,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::pair<int, std::size_t>, fftw_plan> plans_;
};

// `in` is copied first because out-of-place halfcomplex plans may clobber their input.
void execute(fftw_r2r_kind kind, std::span<const double> in, std::span<double> out)
{
    std::vector<double> scratch(in.begin(), in.end());
    fftw_execute_r2r(PlanCache::instance().get(kind, in.size()), scratch.data(), out.data());
}

} // namespace

void forward_1d(Basis basis, std::span<const double> in, std::span<double> out)
{
    const std::size_t n = in.size();
    const double nd = static_cast<double>(n);
    switch (basis) {
    case Basis::Fourier: {
        execute(FFTW_R2HC, in, out);
        const double edge = 1.0 / std::sqrt(nd);
        const double interior = std::sqrt(2.0 / nd);
        out[0] *= edge;
        out[n / 2] *= edge;
        for (std::size_t k = 1; k < n / 2; ++k) {
            out[k] *= interior;
            out[n - k] *= -interior;
        }
        break;
    }
    case Basis::SineI: {
        execute(FFTW_RODFT00, in, out);
        const double scale = 1.0 / std::sqrt(2.0 * (nd + 1.0));
        for (double& v : out) v *= scale;
        break;
    }
    case Basis::CosineII: {
        execute(FFTW_REDFT10, in, out);
        out[0] *= 0.5 / std::sqrt(nd);
        for (std::size_t k = 1; k < n; ++k) out[k] *= 0.5 * std::sqrt(2.0 / nd);
        break;
    }
    case Basis::SineII: {
        execute(FFTW_RODFT10, in, out);
        for (std::size_t k = 0; k + 1 < n; ++k) out[k] *= 0.5 * std::sqrt(2.0 / nd);
        out[n - 1] *= 0.5 / std::sqrt(nd);
        break;
    }
    case Basis::CosineEval: inverse_1d(Basis::CosineEval, in, out); break;
    }
}

void inverse_1d(Basis basis, std::span<const double> in, std::span<double> out)
{
    const std::size_t n = in.size();
    const double nd = static_cast<double>(n);
    std::vector<double> scaled(in.begin(), in.end());
    switch (basis) {
    case Basis::Fourier: {
        const double edge = 1.0 / std::sqrt(nd);
        const double interior = 1.0 / std::sqrt(2.0 * nd);
        scaled[0] *= edge;
        scaled[n / 2] *= edge;
        for (std::size_t k = 1; k < n / 2; ++k) {
            scaled[k] *= interior;
            scaled[n - k] *= -interior;
        }
        execute(FFTW_HC2R, scaled, out);
        break;
    }
    case Basis::SineI: {
        const double scale = 1.0 / std::sqrt(2.0 * (nd + 1.0));
        for (double& v : scaled) v *= scale;
        execute(FFTW_RODFT00, scaled, out);
        break;
    }
    case Basis::CosineII: {
        scaled[0] *= 1.0 / std::sqrt(nd);
        for (std::size_t k = 1; k < n; ++k) scaled[k] *= 0.5 * std::sqrt(2.0 / nd);
        execute(FFTW_REDFT01, scaled, out);
        break;
    }
    case Basis::SineII: {
        for (std::size_t k = 0; k + 1 < n; ++k) scaled[k] *= 0.5 * std::sqrt(2.0 / nd);
        scaled[n - 1] *= 1.0 / std::sqrt(nd);
        execute(FFTW_RODFT01, scaled, out);
        break;
    }
    case Basis::CosineEval: {
        // Embed modes 1..n into a DCT-I of length n+2 and keep the interior samples.
        std::vector<double> padded(n + 2, 0.0), full(n + 2);
        const double scale = 0.5 * std::sqrt(2.0 / (nd + 1.0));
        for (std::size_t k = 0; k < n; ++k) padded[k + 1] = in[k] * scale;
        execute(FFTW_REDFT00, padded, full);
        for (std::size_t j = 0; j < n; ++j) out[j] = full[j + 1];
        break;
    }
    }
}

void transform_axis(std::span<double> data, std::size_t n, int dim, int axis, Basis basis, Direction dir)
{
    std::vector<double> line(n), result(n);
    const std::size_t lines = dim == 2 ? n : 1;
    const std::size_t stride = (dim == 2 && axis == 1) ? n : 1;
    for (std::size_t l = 0; l < lines; ++l) {
        const std::size_t offset = (dim == 2 && axis == 1) ? l : l * n;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[offset + k * stride];
        if (dir == Direction::Forward) forward_1d(basis, line, result);
        else inverse_1d(basis, line, result);
        for (std::size_t k = 0; k < n; ++k) data[offset + k * stride] = result[k];
    }
}

} // namespace nlpm::detail
