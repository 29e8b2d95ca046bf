#include "ultranet/product.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ultranet {

namespace {

std::vector<double> ratio_grid(double range_octaves, int per_octave) {
    std::vector<double> r;
    int steps = static_cast<int>(2 * range_octaves * per_octave);
    for (int i = 0; i <= steps; ++i)
        r.push_back(std::pow(2.0, -range_octaves + i / static_cast<double>(per_octave)));
    return r;
}

struct SampledSum {
    std::vector<int> bins;
    bool cancelled = false;
};

SampledSum sample_sums(const ConeSet& a, const ConeSet& b, const DirectionBins& bins,
                       int dirs_per_bin, double range_octaves, int ratios_per_octave,
                       double cancel_tol) {
    SampledSum out;
    std::vector<double> ratios = ratio_grid(range_octaves, ratios_per_octave);
    std::vector<int> hit(bins.count(), 0);
    for (int ba : a.members())
        for (int bb : b.members())
            for (const auto& u : bins.directions_in_bin(ba, dirs_per_bin))
                for (const auto& v : bins.directions_in_bin(bb, dirs_per_bin))
                    for (double r : ratios) {
                        double wx = u[0] + r * v[0];
                        double wy = u[1] + r * v[1];
                        double norm = std::hypot(wx, wy);
                        if (norm <= cancel_tol * (1.0 + r)) {
                            out.cancelled = true;
                            continue;
                        }
                        hit[bins.bin_of(wx, wy)] = 1;
                    }
    for (int bIdx = 0; bIdx < bins.count(); ++bIdx)
        if (hit[bIdx]) out.bins.push_back(bIdx);
    return out;
}

}  // namespace

ConePair cone_sum(const ConeSet& a, const ConeSet& b, const DirectionBins& bins,
                  const ConeSumOptions& opts) {
    if (a.bin_count() != bins.count() || b.bin_count() != bins.count())
        throw IncompatibilityError("cone_sum: cones use different direction bins");
    ConePair pair;
    if (a.empty() || b.empty()) {
        pair.sum = ConeSet(bins, {});
        pair.closure_union = a.unite(b);
        return pair;
    }
    SampledSum s = sample_sums(a, b, bins, opts.directions_per_bin, opts.ratio_range_octaves,
                               opts.ratios_per_octave, opts.cancel_tol);
    pair.sum_defined = !s.cancelled;
    pair.sum = ConeSet(bins, s.bins);
    pair.closure_union = pair.sum.unite(a).unite(b);
    return pair;
}

ConeSet brute_force_closure(const ConeSet& a, const ConeSet& b, const DirectionBins& bins,
                            int directions_per_bin, int ratios_per_octave,
                            double ratio_range_octaves) {
    SampledSum s =
        sample_sums(a, b, bins, directions_per_bin, ratio_range_octaves, ratios_per_octave, 1e-9);
    ConeSet sum(bins, s.bins);
    // Limit points of w = u + r v as r -> 0 or r -> inf are the endpoints
    // themselves; the closure in R^m \ {0} adds both cones.
    return sum.unite(a).unite(b);
}

ConeSet random_cone(std::mt19937& rng, const DirectionBins& bins, int max_arcs,
                    int max_arc_width) {
    std::uniform_int_distribution<int> arc_count(1, max_arcs);
    std::uniform_int_distribution<int> start(0, bins.count() - 1);
    std::uniform_int_distribution<int> width(1, max_arc_width);
    std::vector<int> members;
    int arcs = arc_count(rng);
    for (int k = 0; k < arcs; ++k) {
        int s = start(rng);
        int w = width(rng);
        for (int i = 0; i < w; ++i) members.push_back((s + i) % bins.count());
    }
    return ConeSet(bins, std::move(members));
}

LemmaTrialStats lemma_closure_trials(int trials, unsigned seed, const DirectionBins& bins,
                                     const ConeSumOptions& opts) {
    std::mt19937 rng(seed);
    LemmaTrialStats stats;
    while (stats.sum_defined < trials) {
        ConeSet a = random_cone(rng, bins);
        ConeSet b = random_cone(rng, bins);
        ++stats.trials;
        ConePair pair = cone_sum(a, b, bins, opts);
        if (!pair.sum_defined) continue;
        ++stats.sum_defined;
        ConeSet brute = brute_force_closure(a, b, bins, 2 * opts.directions_per_bin,
                                            2 * opts.ratios_per_octave, opts.ratio_range_octaves);
        if (pair.closure_union == brute) ++stats.exact_matches;
        else stats.failed_trials.push_back(stats.trials);
        if (stats.trials > 100 * trials)
            throw Error("lemma_closure_trials: could not draw enough sum-defined pairs");
    }
    return stats;
}

namespace {

std::map<std::array<int, 2>, ConeSet> cones_by_cell(const WavefrontEstimate& wf,
                                                    const DirectionBins& bins) {
    std::map<std::array<int, 2>, std::vector<int>> raw;
    for (const auto& p : wf.pairs) raw[p.cell].push_back(p.bin);
    std::map<std::array<int, 2>, ConeSet> out;
    for (auto& [cell, members] : raw) out.emplace(cell, ConeSet(bins, members));
    return out;
}

}  // namespace

WfSumResult wf_sum(const WavefrontEstimate& wf_f, const WavefrontEstimate& wf_g,
                   const DirectionBins& bins, const ConeSumOptions& opts) {
    if (wf_f.cell_counts != wf_g.cell_counts || wf_f.cell_spacings != wf_g.cell_spacings)
        throw IncompatibilityError("wf_sum: estimates use different cell decompositions");
    WfSumResult out;
    auto f_cones = cones_by_cell(wf_f, bins);
    auto g_cones = cones_by_cell(wf_g, bins);
    for (const auto& [cell, fc] : f_cones) {
        auto it = g_cones.find(cell);
        if (it == g_cones.end()) continue;
        ConePair pair = cone_sum(fc, it->second, bins, opts);
        if (!pair.sum_defined) {
            out.hypothesis_ok = false;
            out.violating_cells.push_back(cell);
            continue;
        }
        for (int b : pair.sum.members()) out.pairs.push_back(WavefrontPair{cell, b, 0.0, 0.0});
    }
    return out;
}

HormanderReport hormander_check(const SampledNet& f, const SampledNet& g,
                                const DirectionBins& bins, const FitOptions& fopts,
                                const LocalizerOptions& lopts, const ConeSumOptions& copts) {
    require_compatible(f, g);
    HormanderReport report;
    report.wf_f = wavefront(f, bins, fopts, lopts);
    report.wf_g = wavefront(g, bins, fopts, lopts);
    report.wf_fg = wavefront(net_mul(f, g), bins, fopts, lopts);

    WfSumResult sum = wf_sum(report.wf_f, report.wf_g, bins, copts);
    report.hypothesis_ok = sum.hypothesis_ok;

    report.allowed = report.wf_f;
    report.allowed.pairs.clear();
    report.allowed.singular_cells.clear();
    std::vector<WavefrontPair> all;
    all.insert(all.end(), sum.pairs.begin(), sum.pairs.end());
    all.insert(all.end(), report.wf_f.pairs.begin(), report.wf_f.pairs.end());
    all.insert(all.end(), report.wf_g.pairs.begin(), report.wf_g.pairs.end());
    std::sort(all.begin(), all.end(), [](const WavefrontPair& a, const WavefrontPair& b) {
        return std::tie(a.cell, a.bin) < std::tie(b.cell, b.bin);
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const WavefrontPair& a, const WavefrontPair& b) {
                              return a.cell == b.cell && a.bin == b.bin;
                          }),
              all.end());
    report.allowed.pairs = std::move(all);

    if (!report.hypothesis_ok) {
        report.applicable = false;
        std::ostringstream os;
        os << "hypothesis violated at " << sum.violating_cells.size()
           << " cell(s) - theorem not applicable";
        report.notes.push_back(os.str());
        return report;
    }
    report.applicable = true;
    // Tolerance dilates the allowed set only, keeping the check one-sided;
    // cells dilate at the estimator's positional resolution.
    report.inclusion_ok =
        report.wf_fg.subset_of(report.allowed, report.wf_fg.resolution_cells, 1);
    if (!report.inclusion_ok)
        report.notes.push_back("product wavefront escapes the dilated allowed set");
    return report;
}

SeparationResult cone_separation(const ConeSet& a, const ConeSet& b, const ConeSet& gamma,
                                 const DirectionBins& bins, const ConeSumOptions& opts) {
    SeparationResult res;
    auto fits = [&](const ConeSet& ga, const ConeSet& gb, int* witness) {
        ConePair pair = cone_sum(ga, gb, bins, opts);
        if (!pair.sum_defined) return false;
        for (int bIdx : pair.closure_union.members())
            if (!gamma.contains(bIdx)) {
                if (witness) *witness = bIdx;
                return false;
            }
        return true;
    };

    int witness = -1;
    if (!fits(a, b, &witness)) {
        res.ok = false;
        res.witness_bin = witness;
        return res;
    }
    res.ok = true;
    res.gamma1 = a;
    res.gamma2 = b;
    res.dilation = 0;
    for (int d = 1; d <= bins.count() / 2; ++d) {
        ConeSet ga = a.dilate(d);
        ConeSet gb = b.dilate(d);
        if (!fits(ga, gb, nullptr)) break;
        res.gamma1 = ga;
        res.gamma2 = gb;
        res.dilation = d;
        if (bins.dim() == 1) break;  // sign bins cannot grow
    }
    return res;
}

std::string HormanderReport::to_json() const {
    auto pairs_json = [](const WavefrontEstimate& wf) {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < wf.pairs.size(); ++i) {
            const auto& p = wf.pairs[i];
            os << (i ? "," : "") << "{\"cell\":[" << p.cell[0] << ',' << p.cell[1]
               << "],\"bin\":" << p.bin << '}';
        }
        os << ']';
        return os.str();
    };
    std::ostringstream os;
    os << "{\"hypothesis_ok\":" << (hypothesis_ok ? "true" : "false")
       << ",\"applicable\":" << (applicable ? "true" : "false")
       << ",\"inclusion_ok\":" << (applicable && inclusion_ok ? "true" : "false")
       << ",\"wf_f\":" << pairs_json(wf_f) << ",\"wf_g\":" << pairs_json(wf_g)
       << ",\"wf_fg\":" << pairs_json(wf_fg) << ",\"allowed\":" << pairs_json(allowed)
       << ",\"notes\":[";
    for (std::size_t i = 0; i < notes.size(); ++i)
        os << (i ? "," : "") << '"' << notes[i] << '"';
    os << "]}";
    return os.str();
}

}  // namespace ultranet
