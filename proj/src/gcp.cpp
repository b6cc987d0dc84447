#include "gbsval/gcp.hpp"

#include "detail_reduce.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gbsval {

namespace {

using cplx = std::complex<double>;

// Poisson-form weights w(m) = exp(m log n' - n' - lgamma(m+1)) over a count
// window, complex principal branch. Log-domain start, then the recurrence
// w(m+1) = w(m) n'/(m+1) inside the window.
void subset_weights(cplx np, int m_min, int m_max, cplx* w) {
    const int width = m_max - m_min + 1;
    if (std::abs(np) < 1e-300) {
        for (int i = 0; i < width; ++i) w[i] = 0.0;
        if (m_min == 0) w[0] = 1.0;
        return;
    }
    cplx w0;
    if (m_min == 0) {
        w0 = std::exp(-np);
    } else {
        const cplx lw = static_cast<double>(m_min) * std::log(np) - np -
                        std::lgamma(static_cast<double>(m_min) + 1.0);
        w0 = std::exp(lw);
    }
    w[0] = w0;
    for (int i = 1; i < width; ++i)
        w[i] = w[i - 1] * np / static_cast<double>(m_min + i);
}

} // namespace

int BinningSpec::order() const {
    int n = 0;
    for (const auto& s : subsets) n += static_cast<int>(s.size());
    return n;
}

std::int64_t BinningSpec::bins() const {
    std::int64_t b = 1;
    for (std::size_t j = 0; j < subsets.size(); ++j)
        b *= static_cast<std::int64_t>(m_max[j] - m_min[j] + 1);
    return b;
}

std::vector<std::int64_t> BinningSpec::shape() const {
    std::vector<std::int64_t> s;
    for (std::size_t j = 0; j < subsets.size(); ++j)
        s.push_back(m_max[j] - m_min[j] + 1);
    return s;
}

void BinningSpec::validate(int total_modes, std::int64_t max_bins) const {
    if (subsets.empty()) throw std::invalid_argument("BinningSpec: no subsets");
    if (m_min.size() != subsets.size() || m_max.size() != subsets.size())
        throw std::invalid_argument("BinningSpec: window arrays must match subset count");
    std::set<int> seen;
    for (std::size_t j = 0; j < subsets.size(); ++j) {
        if (subsets[j].empty())
            throw std::invalid_argument("BinningSpec: empty subset");
        for (int i : subsets[j]) {
            if (i < 0 || i >= total_modes)
                throw std::invalid_argument("BinningSpec: mode index out of range");
            if (!seen.insert(i).second)
                throw std::invalid_argument("BinningSpec: subsets overlap at mode " +
                                            std::to_string(i));
        }
        if (m_min[j] < 0 || m_max[j] < m_min[j])
            throw std::invalid_argument("BinningSpec: invalid count window");
    }
    if (bins() > max_bins)
        throw std::invalid_argument("BinningSpec: " + std::to_string(bins()) +
                                    " bins exceed the memory budget of " +
                                    std::to_string(max_bins));
}

BinningSpec BinningSpec::total_counts(int total_modes, int mmin, int mmax) {
    BinningSpec spec;
    spec.subsets.emplace_back(total_modes);
    std::iota(spec.subsets[0].begin(), spec.subsets[0].end(), 0);
    spec.m_min = {mmin};
    spec.m_max = {mmax};
    return spec;
}

BinningSpec BinningSpec::contiguous_split(int total_modes, int d) {
    if (d < 1 || d > total_modes)
        throw std::invalid_argument("contiguous_split: need 1 <= d <= modes");
    BinningSpec spec;
    int start = 0;
    for (int j = 0; j < d; ++j) {
        int len = total_modes / d + (j < total_modes % d ? 1 : 0);
        std::vector<int> s(len);
        std::iota(s.begin(), s.end(), start);
        start += len;
        spec.subsets.push_back(std::move(s));
        spec.m_min.push_back(0);
        spec.m_max.push_back(0);
    }
    return spec;
}

BinningSpec permute_modes(const BinningSpec& spec, const std::vector<int>& perm) {
    std::vector<bool> hit(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || p >= static_cast<int>(perm.size()) || hit[p])
            throw std::invalid_argument("permute_modes: map is not a bijection");
        hit[p] = true;
    }
    BinningSpec out = spec;
    for (auto& s : out.subsets)
        for (auto& i : s) i = perm[i];
    return out;
}

CountPatternSet permute_modes(const CountPatternSet& set, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != set.modes())
        throw std::invalid_argument("permute_modes: permutation length != mode count");
    std::vector<bool> hit(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || p >= set.modes() || hit[p])
            throw std::invalid_argument("permute_modes: map is not a bijection");
        hit[p] = true;
    }
    CountPatternSet out;
    out.patterns.resize(set.size(), set.modes());
    for (int j = 0; j < set.modes(); ++j)
        out.patterns.col(perm[j]) = set.patterns.col(j);
    out.provenance = set.provenance + " (permuted)";
    return out;
}

double GcpEstimate::sum() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
}

double& GcpEstimate::at(const std::vector<int>& m) {
    auto sh = spec.shape();
    if (m.size() != sh.size()) throw std::out_of_range("GcpEstimate: wrong dimension");
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < sh.size(); ++j) {
        if (m[j] < spec.m_min[j] || m[j] > spec.m_max[j])
            throw std::out_of_range("GcpEstimate: count outside the window");
        idx = idx * sh[j] + (m[j] - spec.m_min[j]);
    }
    return probabilities[static_cast<std::size_t>(idx)];
}

double GcpEstimate::value(const std::vector<int>& m) const {
    return const_cast<GcpEstimate*>(this)->at(m);
}

GcpEstimate GcpEstimate::marginalized(int axis) const {
    const int d = spec.dimension();
    if (axis < 0 || axis >= d)
        throw std::invalid_argument("marginalized: axis out of range");
    auto sh = spec.shape();
    std::int64_t outer = 1, inner = 1;
    for (int j = 0; j < axis; ++j) outer *= sh[j];
    for (int j = axis + 1; j < d; ++j) inner *= sh[j];
    const std::int64_t w = sh[axis];

    GcpEstimate out;
    out.spec = spec;
    out.spec.subsets.erase(out.spec.subsets.begin() + axis);
    out.spec.m_min.erase(out.spec.m_min.begin() + axis);
    out.spec.m_max.erase(out.spec.m_max.begin() + axis);
    out.plan = plan;
    out.n_patterns = n_patterns;
    out.probabilities.assign(static_cast<std::size_t>(outer * inner), 0.0);
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t k = 0; k < w; ++k)
            for (std::int64_t i = 0; i < inner; ++i)
                out.probabilities[static_cast<std::size_t>(o * inner + i)] +=
                    probabilities[static_cast<std::size_t>((o * w + k) * inner + i)];
    return out;
}

GcpEstimate estimate_gcp(const PhaseSpaceEnsemble& ens, const BinningSpec& spec,
                         const EstimateOptions& opts) {
    spec.validate(ens.modes(), opts.max_bins);
    ens.plan().validate(opts.error_bars);

    const int d = spec.dimension();
    const std::int64_t bins = spec.bins();
    const std::int64_t n_r = ens.plan().trajectories;
    const std::int64_t n_s = ens.plan().samples_per_trajectory;
    const auto sh = spec.shape();

    auto part = detail::make_groups(n_r, bins);
    std::vector<std::vector<double>> gsum(part.groups), gsumsq(part.groups);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t g = 0; g < part.groups; ++g) {
        gsum[g].assign(static_cast<std::size_t>(bins), 0.0);
        gsumsq[g].assign(static_cast<std::size_t>(bins), 0.0);
        std::vector<double> tsum(static_cast<std::size_t>(bins));
        std::vector<std::vector<cplx>> w(d);
        for (int j = 0; j < d; ++j) w[j].resize(static_cast<std::size_t>(sh[j]));

        for (std::int64_t k = part.begin(g); k < part.end(g); ++k) {
            TrajectoryBlock blk = ens.trajectory(k);
            std::fill(tsum.begin(), tsum.end(), 0.0);
            for (std::int64_t s = 0; s < n_s; ++s) {
                for (int j = 0; j < d; ++j) {
                    cplx np = 0.0;
                    for (int i : spec.subsets[static_cast<std::size_t>(j)])
                        np += blk.alpha(i, s) * std::conj(blk.beta(i, s));
                    subset_weights(np, spec.m_min[static_cast<std::size_t>(j)],
                                   spec.m_max[static_cast<std::size_t>(j)],
                                   w[static_cast<std::size_t>(j)].data());
                }
                if (d == 1) {
                    const auto& w0 = w[0];
                    for (std::int64_t i = 0; i < sh[0]; ++i)
                        tsum[static_cast<std::size_t>(i)] +=
                            w0[static_cast<std::size_t>(i)].real();
                } else if (d == 2) {
                    const auto& w0 = w[0];
                    const auto& w1 = w[1];
                    for (std::int64_t i0 = 0; i0 < sh[0]; ++i0) {
                        const cplx a = w0[static_cast<std::size_t>(i0)];
                        double* row = tsum.data() + i0 * sh[1];
                        for (std::int64_t i1 = 0; i1 < sh[1]; ++i1) {
                            const cplx b = w1[static_cast<std::size_t>(i1)];
                            row[i1] += a.real() * b.real() - a.imag() * b.imag();
                        }
                    }
                } else {
                    // generic odometer over the first d-1 axes, tight loop on
                    // the last one
                    std::vector<std::int64_t> idx(static_cast<std::size_t>(d - 1), 0);
                    bool done = false;
                    while (!done) {
                        cplx prefix = 1.0;
                        std::int64_t off = 0;
                        for (int j = 0; j < d - 1; ++j) {
                            prefix *= w[static_cast<std::size_t>(j)]
                                       [static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
                            off = (off + idx[static_cast<std::size_t>(j)]) * sh[j + 1];
                        }
                        const auto& wl = w[static_cast<std::size_t>(d - 1)];
                        double* row = tsum.data() + off;
                        for (std::int64_t i = 0; i < sh[d - 1]; ++i) {
                            const cplx b = wl[static_cast<std::size_t>(i)];
                            row[i] += prefix.real() * b.real() - prefix.imag() * b.imag();
                        }
                        int j = d - 2;
                        for (; j >= 0; --j) {
                            if (++idx[static_cast<std::size_t>(j)] < sh[j]) break;
                            idx[static_cast<std::size_t>(j)] = 0;
                        }
                        if (j < 0) done = true;
                    }
                }
            }
            const double inv = 1.0 / static_cast<double>(n_s);
            for (std::int64_t i = 0; i < bins; ++i) {
                const double m = tsum[static_cast<std::size_t>(i)] * inv;
                gsum[g][static_cast<std::size_t>(i)] += m;
                gsumsq[g][static_cast<std::size_t>(i)] += m * m;
            }
        }
    }

    std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(bins), 0.0);
    for (std::int64_t g = 0; g < part.groups; ++g)
        for (std::int64_t i = 0; i < bins; ++i) {
            sum[static_cast<std::size_t>(i)] += gsum[g][static_cast<std::size_t>(i)];
            sumsq[static_cast<std::size_t>(i)] += gsumsq[g][static_cast<std::size_t>(i)];
        }

    GcpEstimate est;
    est.spec = spec;
    est.plan = ens.plan();
    est.probabilities.resize(static_cast<std::size_t>(bins));
    for (std::int64_t i = 0; i < bins; ++i)
        est.probabilities[static_cast<std::size_t>(i)] =
            sum[static_cast<std::size_t>(i)] / static_cast<double>(n_r);
    if (opts.error_bars) {
        est.sigma.resize(static_cast<std::size_t>(bins));
        for (std::int64_t i = 0; i < bins; ++i) {
            const double mean = est.probabilities[static_cast<std::size_t>(i)];
            double var = (sumsq[static_cast<std::size_t>(i)] -
                          static_cast<double>(n_r) * mean * mean) /
                         static_cast<double>(n_r - 1);
            est.sigma[static_cast<std::size_t>(i)] =
                std::sqrt(std::max(var, 0.0) / static_cast<double>(n_r));
        }
    }
    return est;
}

BinningSpec default_windows(const PhaseSpaceEnsemble& ens, const BinningSpec& subsets_only,
                            double threshold, std::int64_t pilot_samples) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("default_windows: threshold must be positive");

    BinningSpec probe = subsets_only;
    // windows are being chosen here; make the incoming ones irrelevant
    for (std::size_t j = 0; j < probe.subsets.size(); ++j) {
        probe.m_min[j] = 0;
        probe.m_max[j] = 0;
    }
    probe.validate(ens.modes(), std::numeric_limits<std::int64_t>::max());

    EnsemblePlan pilot_plan;
    pilot_plan.samples_per_trajectory = pilot_samples;
    pilot_plan.trajectories = 1;
    pilot_plan.seed = ens.plan().seed ^ 0x70696c6f74ULL;
    PhaseSpaceEnsemble pilot(ens.bank(), ens.network(), pilot_plan);
    TrajectoryBlock blk = pilot.trajectory(0);

    const int d = probe.dimension();
    BinningSpec out = probe;
    for (int j = 0; j < d; ++j) {
        // coarse 1-D marginal of subset j from the pilot samples
        std::vector<cplx> np(static_cast<std::size_t>(pilot_samples));
        double mu = 0.0, mu2 = 0.0;
        for (std::int64_t s = 0; s < pilot_samples; ++s) {
            cplx v = 0.0;
            for (int i : probe.subsets[static_cast<std::size_t>(j)])
                v += blk.alpha(i, s) * std::conj(blk.beta(i, s));
            np[static_cast<std::size_t>(s)] = v;
            mu += v.real();
            mu2 += v.real() * v.real();
        }
        mu /= static_cast<double>(pilot_samples);
        mu2 /= static_cast<double>(pilot_samples);
        const double sd = std::sqrt(std::max(mu2 - mu * mu, 0.0));
        const int cap =
            std::max(4, static_cast<int>(std::ceil(std::max(0.0, mu) + 12.0 * sd + 30.0)));

        std::vector<double> g(static_cast<std::size_t>(cap) + 1, 0.0);
        std::vector<cplx> w(static_cast<std::size_t>(cap) + 1);
        for (std::int64_t s = 0; s < pilot_samples; ++s) {
            subset_weights(np[static_cast<std::size_t>(s)], 0, cap, w.data());
            for (int m = 0; m <= cap; ++m)
                g[static_cast<std::size_t>(m)] += w[static_cast<std::size_t>(m)].real();
        }
        for (auto& v : g) v /= static_cast<double>(pilot_samples);

        int lo = 0, hi = 0;
        bool any = false;
        for (int m = 0; m <= cap; ++m) {
            if (g[static_cast<std::size_t>(m)] > threshold) {
                if (!any) lo = m;
                hi = m;
                any = true;
            }
        }
        if (!any) { lo = 0; hi = 0; }
        out.m_min[static_cast<std::size_t>(j)] = lo;
        out.m_max[static_cast<std::size_t>(j)] = hi;
    }
    return out;
}

GcpEstimate bin_patterns(const CountPatternSet& set, const BinningSpec& spec) {
    spec.validate(set.modes(), std::numeric_limits<std::int64_t>::max());
    for (std::int64_t i = 0; i < set.size(); ++i)
        for (int j = 0; j < set.modes(); ++j)
            if (set.patterns(i, j) < 0)
                throw std::invalid_argument("bin_patterns: negative count");

    const int d = spec.dimension();
    const auto sh = spec.shape();
    GcpEstimate est;
    est.spec = spec;
    est.n_patterns = set.size();
    est.probabilities.assign(static_cast<std::size_t>(spec.bins()), 0.0);
    est.underflow.assign(static_cast<std::size_t>(d), 0);
    est.overflow.assign(static_cast<std::size_t>(d), 0);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.bins()), 0);
    for (std::int64_t i = 0; i < set.size(); ++i) {
        std::int64_t idx = 0;
        bool inside = true;
        for (int j = 0; j < d; ++j) {
            std::int64_t m = 0;
            for (int mode : spec.subsets[static_cast<std::size_t>(j)])
                m += set.patterns(i, mode);
            if (m < spec.m_min[static_cast<std::size_t>(j)]) {
                ++est.underflow[static_cast<std::size_t>(j)];
                inside = false;
            } else if (m > spec.m_max[static_cast<std::size_t>(j)]) {
                ++est.overflow[static_cast<std::size_t>(j)];
                inside = false;
            }
            if (inside) idx = idx * sh[j] + (m - spec.m_min[static_cast<std::size_t>(j)]);
        }
        if (inside) ++counts[static_cast<std::size_t>(idx)];
    }
    for (std::size_t i = 0; i < counts.size(); ++i)
        est.probabilities[i] =
            static_cast<double>(counts[i]) / static_cast<double>(set.size());
    return est;
}

} // namespace gbsval
