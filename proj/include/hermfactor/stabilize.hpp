#pragma once

// Multiplication by <z,w>^d and the search for the smallest d at which
// <z,w>^d F has a PD (strict) or PSD (semi) coefficient matrix.

#include "hermfactor/certify.hpp"
#include "hermfactor/factor.hpp"
#include "hermfactor/form.hpp"

#include <chrono>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hermfactor {

enum class StabilizationMode { strict, semi };

inline std::string_view to_string(StabilizationMode m) { return m == StabilizationMode::strict ? "strict" : "semi"; }

inline StabilizationMode parse_mode(std::string_view s)
{
    if (s == "strict") return StabilizationMode::strict;
    if (s == "semi") return StabilizationMode::semi;
    throw Error("invalid mode '" + std::string(s) + "' (expected strict or semi)");
}

namespace detail {
inline unsigned require_bidegree(const BihermitianForm& f, const char* who)
{
    auto m = bidegree(f);
    if (!m) throw BidegreeError(std::string(who) + ": form is not bihomogeneous");
    return *m;
}
}  // namespace detail

/// <z,w> * F: G(alpha + e_k, beta + e_k) += F(alpha, beta) for k = 1..n.
inline BihermitianForm multiplier_shift(const BihermitianForm& f)
{
    detail::require_bidegree(f, "multiplier_shift");
    BihermitianForm g(f.n(), f.r());
    for (const auto& [key, c] : f.terms())
        for (std::size_t k = 0; k < f.n(); ++k) {
            const MultiIndex e = MultiIndex::unit(f.n(), k);
            g.add_term(key.i, key.j, key.alpha + e, key.beta + e, c);
        }
    return g;
}

/// <z,w>^d * F via the multinomial expansion of <z,w>^d.
inline BihermitianForm multiplier_power(const BihermitianForm& f, unsigned d)
{
    detail::require_bidegree(f, "multiplier_power");
    if (d == 0) return f;
    const auto gammas = enumerate_degree(f.n(), d);
    std::vector<Rational> weights;
    weights.reserve(gammas.size());
    for (const auto& g : gammas) weights.push_back(multinomial(d, g));
    BihermitianForm out(f.n(), f.r());
    for (const auto& [key, c] : f.terms())
        for (std::size_t k = 0; k < gammas.size(); ++k)
            out.add_term(key.i, key.j, key.alpha + gammas[k], key.beta + gammas[k], c * GaussianRational(weights[k]));
    return out;
}

struct StabilizationStep {
    unsigned d = 0;
    std::size_t matrix_size = 0;
    bool passed = false;
    SignatureCertificate certificate;
};

struct StabilizationReport {
    StabilizationMode mode = StabilizationMode::strict;
    unsigned d_max = 0;
    unsigned bidegree = 0;
    std::optional<unsigned> d_min;
    std::vector<StabilizationStep> trail;  // d = 0 .. d_min (or d_max)
    std::optional<BihermitianForm> shifted;  // <z,w>^{d_min} F
    std::optional<WeightedGramFactor> factor;

    const StabilizationStep* at_minimum() const { return d_min ? &trail.at(*d_min) : nullptr; }
};

/// Linear upward search over d = 0..d_max; every step keeps its certificate.
inline StabilizationReport find_minimal_d(const BihermitianForm& f, StabilizationMode mode, unsigned d_max)
{
    if (!is_hermitian_symmetric(f)) throw NotHermitianError("find_minimal_d: form is not hermitian-symmetric");
    StabilizationReport rep;
    rep.mode = mode;
    rep.d_max = d_max;
    rep.bidegree = detail::require_bidegree(f, "find_minimal_d");
    const bool strict = mode == StabilizationMode::strict;
    BihermitianForm g = f;
    for (unsigned d = 0; d <= d_max; ++d) {
        if (d > 0) g = multiplier_shift(g);
        const CoefficientMatrix cm = coefficient_matrix(g, rep.bidegree + d);
        StabilizationStep step;
        step.d = d;
        step.matrix_size = cm.matrix.rows();
        step.certificate = ldl_signature(cm.matrix);
        step.passed = strict ? step.certificate.positive_definite() : step.certificate.positive_semidefinite();
        const bool done = step.passed;
        if (done) rep.factor = factor_from_certificate(g, cm, step.certificate, strict);
        rep.trail.push_back(std::move(step));
        if (done) {
            rep.d_min = d;
            rep.shifted = g;
            break;
        }
    }
    return rep;
}

struct SweepRow {
    std::string label;
    std::optional<unsigned> d_min;
    std::size_t matrix_size = 0;  // at d_min, 0 when absent
    double elapsed_ms = 0;
    std::string error;            // nonempty when the entry could not be searched
    std::optional<StabilizationReport> report;
};

using Family = std::vector<std::pair<std::string, BihermitianForm>>;

/// One row per family member, in input order. Errors are recorded per row.
/// With parallel = true entries run concurrently; output order is unchanged.
inline std::vector<SweepRow> stabilization_sweep(const Family& family, StabilizationMode mode, unsigned d_max,
                                                 bool parallel = false)
{
    auto run = [mode, d_max](const std::string& label, const BihermitianForm& f) {
        SweepRow row;
        row.label = label;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            StabilizationReport rep = find_minimal_d(f, mode, d_max);
            row.d_min = rep.d_min;
            if (rep.d_min) row.matrix_size = rep.trail.back().matrix_size;
            row.report = std::move(rep);
        } catch (const Error& e) {
            row.error = e.what();
        }
        row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return row;
    };
    std::vector<SweepRow> rows;
    rows.reserve(family.size());
    if (!parallel) {
        for (const auto& [label, f] : family) rows.push_back(run(label, f));
        return rows;
    }
    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(family.size());
    for (const auto& [label, f] : family) jobs.push_back(std::async(std::launch::async, run, label, f));
    for (auto& j : jobs) rows.push_back(j.get());
    return rows;
}

}  // namespace hermfactor
