// Copyright 2026 The xebstats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "xebstats/errors.hpp"
#include "xebstats/gof.hpp"
#include "xebstats/io.hpp"
#include "xebstats/prediction.hpp"
#include "xebstats/serialize.hpp"
#include "xebstats/uncertainty.hpp"

namespace xebstats::cli {

namespace {

using nlohmann::json;

std::string emit_json(const json &j) { return j.dump(2) + "\n"; }

std::vector<double> read_acceptance(const std::string &path, std::size_t M) {
    std::string text = read_file_text(path);
    std::vector<double> tau;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string_view line(text.data() + pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || (first && line.starts_with("n="))) {
            first = false;
            continue;
        }
        first = false;
        double x = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), x);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw FormatError(fmt::format("'{}': cannot parse acceptance value '{}'", path, line));
        }
        tau.push_back(x);
    }
    if (tau.size() != M) {
        throw DimensionError(fmt::format("'{}' has {} acceptance values, expected {}", path, tau.size(), M));
    }
    return tau;
}

std::vector<ProbabilityVector> read_components(const std::vector<std::string> &paths) {
    std::vector<ProbabilityVector> out;
    for (const auto &p : paths) {
        out.push_back(read_probabilities(p));
    }
    return out;
}

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

json interval_json(const Estimate &e) {
    if (e.value.size() == 1) {
        if (auto se = e.standard_error()) {
            return to_json(ci_conditional_single(e.value[0], *se));
        }
        return nullptr;
    }
    json list = json::array();
    bool any = false;
    for (std::size_t k = 0; k < e.value.size(); ++k) {
        if (auto se = e.standard_error(k)) {
            list.push_back(to_json(ci_conditional_single(e.value[k], *se)));
            any = true;
        } else {
            list.push_back(nullptr);
        }
    }
    return any ? list : json(nullptr);
}

}  // namespace

ModelSpec resolve_model(const ModelFlags &f) {
    ModelSpec spec;
    const bool asym = f.q1 || f.q2 || f.phi_g;
    const bool general = !f.phis.empty();
    const bool symmetric = f.q || f.phi_ro;
    if (asym) {
        if (f.q) {
            throw UsageError("--q cannot be combined with --q1/--q2 (choose the symmetric or asymmetric readout model)");
        }
        if (f.phi_ro || f.phi || general) {
            throw UsageError("the asymmetric readout model takes only --phi-g, --q1 and --q2");
        }
        if (!f.q1 || !f.q2 || !f.phi_g) {
            throw UsageError("the asymmetric readout model needs all of --phi-g, --q1 and --q2");
        }
        spec.kind = ModelSpec::Kind::ReadoutAsymmetric;
        spec.phi_g = *f.phi_g;
        spec.q1 = *f.q1;
        spec.q2 = *f.q2;
        return spec;
    }
    if (general) {
        if (symmetric || f.phi) {
            throw UsageError("--phis cannot be combined with --phi, --phi-ro or --q");
        }
        spec.kind = ModelSpec::Kind::GeneralP;
        spec.phis = f.phis;
        return spec;
    }
    if (symmetric) {
        if (!f.phi || !f.phi_ro || !f.q) {
            throw UsageError("the symmetric readout model needs all of --phi, --phi-ro and --q");
        }
        spec.kind = ModelSpec::Kind::ReadoutSymmetric;
        spec.phi = *f.phi;
        spec.phi_ro = *f.phi_ro;
        spec.q = *f.q;
        return spec;
    }
    if (!f.phi) {
        throw UsageError("no sampling model given (use --phi, or --phi/--phi-ro/--q, --phi-g/--q1/--q2, or --phis)");
    }
    spec.kind = ModelSpec::Kind::Basic;
    spec.phi = *f.phi;
    return spec;
}

std::string cmd_gen(const GlobalOptions &g, const GenOptions &o) {
    if (g.out.empty()) {
        throw UsageError("gen needs --out");
    }
    // Same seed as file `stream` of repetition 0 in `mc`.
    const SeedSpec seed = SeedSpec{g.seed, o.stream}.purpose(kGenerationStream);
    ProbabilityVector pv = gen_porter_thomas(o.n, seed);
    if (o.text) {
        write_probabilities_text(g.out, pv);
    } else {
        write_probabilities_binary(g.out, pv);
    }
    return {};
}

std::string cmd_sample(const GlobalOptions &g, const SampleOptions &o) {
    if (g.out.empty()) {
        throw UsageError("sample needs --out");
    }
    if (o.N < 1) {
        throw UsageError("sample needs --N >= 1");
    }
    const ModelSpec spec = resolve_model(o.model);
    std::optional<ProbabilityVector> pv;
    if (!o.probs.empty()) {
        pv = read_probabilities(o.probs);
    } else if (spec.kind != ModelSpec::Kind::GeneralP) {
        throw UsageError("sample needs --probs");
    }
    std::optional<NoiseModel> model;
    std::optional<ProbabilityVector> v;
    switch (spec.kind) {
        case ModelSpec::Kind::Basic:
            model = BasicModel{spec.phi};
            break;
        case ModelSpec::Kind::GeneralP: {
            if (o.components.size() != spec.phis.size()) {
                throw UsageError(fmt::format("--phis has {} weights but --components names {} files", spec.phis.size(),
                                             o.components.size()));
            }
            model = GeneralPModel{spec.phis, read_components(o.components)};
            break;
        }
        case ModelSpec::Kind::ReadoutSymmetric:
            model = ReadoutSymmetricModel{spec.phi, spec.phi_ro, spec.q};
            break;
        case ModelSpec::Kind::ReadoutAsymmetric:
            model = ReadoutAsymmetricModel{spec.phi_g, spec.q1, spec.q2};
            break;
    }
    if (!o.v_out.empty() && spec.kind != ModelSpec::Kind::ReadoutSymmetric) {
        throw UsageError("--v-out applies only to the symmetric readout model");
    }
    const ProbabilityVector &base = pv ? *pv : std::get<GeneralPModel>(*model).components.front();
    ProbabilityVector pi = sampling_probs(*model, base);
    const SeedSpec seed = SeedSpec{g.seed, o.stream}.purpose(kSamplingStream);
    Sample s;
    if (!o.rejection_file.empty()) {
        auto tau = read_acceptance(o.rejection_file, pi.M());
        s = draw_sample_with_rejection(pi, tau, o.N, seed);
    } else {
        s = draw_sample(pi, nullptr, nullptr, o.N, seed);
    }
    if (!o.v_out.empty()) {
        v = readout_noise_vector(base, spec.q);
        write_probabilities_binary(o.v_out, *v);
    }
    write_sample(g.out, s);
    return {};
}

std::string cmd_estimate(const GlobalOptions &g, const EstimateOptions &o) {
    if (o.sample.empty()) {
        throw UsageError("estimate needs --sample");
    }
    Sample raw = read_sample(o.sample);
    std::optional<ProbabilityVector> pv;
    if (!o.probs.empty()) {
        pv = read_probabilities(o.probs);
        if (pv->n() != raw.n) {
            throw DimensionError(fmt::format("probability file has n={}, sample has n={}", pv->n(), raw.n));
        }
    }
    std::optional<ProbabilityVector> v;
    if (!o.v_file.empty()) {
        v = read_probabilities(o.v_file);
        if (v->n() != raw.n) {
            throw DimensionError(fmt::format("v file has n={}, sample has n={}", v->n(), raw.n));
        }
    } else if (o.q && pv) {
        v = readout_noise_vector(*pv, *o.q);
    }
    std::vector<ProbabilityVector> components = read_components(o.components);
    for (const auto &c : components) {
        if (c.n() != raw.n) {
            throw DimensionError("component file n does not match the sample");
        }
    }

    std::vector<Method> methods;
    const bool all = o.methods.empty() ||
                     (o.methods.size() == 1 && (o.methods[0] == "all" || o.methods[0] == "ALL"));
    if (all) {
        if (pv) {
            methods = {Method::U, Method::V, Method::LogU, Method::MLE};
        }
        methods.push_back(Method::T);
        if (components.size() >= 2) {
            methods.push_back(Method::GeneralMoment);
            methods.push_back(Method::GeneralMLE);
        }
        if (v && pv) {
            methods.push_back(Method::ReadoutMoment);
        }
        if (v && pv) {
            methods.push_back(Method::ReadoutMLE);
        }
        if (v && o.q) {
            methods.push_back(Method::PhiRoTilde);
        }
    } else {
        for (const auto &name : o.methods) {
            methods.push_back(parse_method(name));
        }
    }

    Sample s = make_sample(raw.n, raw.indices, pv ? &*pv : nullptr, v ? &*v : nullptr);
    const double M = std::ldexp(1.0, static_cast<int>(raw.n));
    const double N = static_cast<double>(s.total());
    std::optional<MomentSummary> mom;
    if (pv) {
        mom = moments(*pv);
    }
    auto need_probs = [&](Method m) {
        if (!pv) {
            throw UsageError(fmt::format("{} requires full probability vector (--probs)", method_name(m)));
        }
    };
    auto need_v = [&](Method m) {
        if (!v) {
            throw UsageError(fmt::format("{} requires the readout noise vector (--v-file, or --q with --probs)",
                                         method_name(m)));
        }
    };

    const EstimateContext ctx{raw.n, s.total(), g.seed_given ? std::optional<std::uint64_t>(g.seed) : std::nullopt};
    json records = json::array();
    std::string csv = "method,component,value,se\n";
    for (Method m : methods) {
        Estimate e;
        switch (m) {
            case Method::U: {
                need_probs(m);
                e = estimator_U(s.sampled_w, M);
                const double a = M * mom->w2 - 1;
                if (a > 1e-12) {
                    const double phi = std::clamp(e.scalar() / a, 0.0, 1.0);
                    e.variance = {var_U_conditional(phi, M, N, mom->w2, mom->w3)};
                    e.provenance = "conditional formula with plug-in phi = U/(M*w2 - 1)";
                }
                break;
            }
            case Method::V:
                need_probs(m);
                e = estimator_V(s.sampled_w, M, mom->w2);
                e.variance = {var_V_conditional(std::clamp(e.scalar(), 0.0, 1.0), M, N, mom->w2, mom->w3)};
                e.provenance = "conditional formula with plug-in phi = V";
                break;
            case Method::LogU:
                need_probs(m);
                e = estimator_log(s.sampled_w, M);
                break;
            case Method::MLE:
                need_probs(m);
                e = mle_basic(s.sampled_w, M);
                break;
            case Method::T:
                e = estimator_T(s.counts, M, s.total());
                break;
            case Method::GeneralMoment:
            case Method::GeneralMLE: {
                if (components.size() < 2) {
                    throw UsageError(fmt::format("{} requires at least two --components files", method_name(m)));
                }
                std::vector<std::vector<double>> per;
                for (const auto &c : components) {
                    per.push_back(gather(c, s.indices));
                }
                e = m == Method::GeneralMoment ? estimator_general_moment(per, M, components) : mle_general(per, M);
                break;
            }
            case Method::ReadoutMoment:
                need_probs(m);
                need_v(m);
                e = estimator_readout_moment(s.sampled_w, *s.sampled_v, *pv, *v);
                break;
            case Method::ReadoutMLE:
                need_probs(m);
                need_v(m);
                e = mle_readout(s.sampled_w, *s.sampled_v, M);
                break;
            case Method::PhiRoTilde:
                need_v(m);
                if (!o.q) {
                    throw UsageError("PhiRoTilde requires --q for the readout constants");
                }
                e = estimator_phi_ro_tilde(statistic_W(*s.sampled_v, M), readout_constants(raw.n, *o.q, M));
                break;
            case Method::AsymmetricMLE:
                need_probs(m);
                e = mle_asymmetric(s.counts, *pv);
                break;
        }
        json rec = to_json(e, ctx);
        rec["ci"] = interval_json(e);
        records.push_back(rec);
        auto cols = estimate_columns(e);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            auto se = k < e.value.size() ? e.standard_error(k) : std::nullopt;
            auto colon = cols[k].first.find(':');
            std::string comp = colon == std::string::npos ? "" : cols[k].first.substr(colon + 1);
            csv += fmt::format("{},{},{},{}\n", method_name(e.method), comp, fmt_double(cols[k].second),
                               se ? fmt_double(*se) : "");
        }
    }
    return g.format == Format::Csv ? csv : emit_json(records);
}

std::string cmd_mc(const GlobalOptions &g, const McOptions &o) {
    ExperimentConfig cfg;
    cfg.n = o.n;
    cfg.N = o.N;
    cfg.L = o.L;
    cfg.reps = o.reps;
    cfg.model = resolve_model(o.model);
    cfg.base_seed = g.seed;
    cfg.workers = g.workers;
    cfg.fixed_circuits = o.fixed_circuits;
    cfg.allow_large = o.allow_large;
    if (!o.methods.empty()) {
        cfg.estimators.clear();
        for (const auto &name : o.methods) {
            cfg.estimators.push_back(parse_method(name));
        }
    }
    ExperimentResult res = run_experiment(cfg);

    std::string summary_csv = "method,count,mean,sd,min,q25,median,q75,max\n";
    for (const auto &s : res.summary) {
        summary_csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", s.method, s.count, fmt_double(s.mean),
                                   fmt_double(s.sd), fmt_double(s.min), fmt_double(s.q25), fmt_double(s.median),
                                   fmt_double(s.q75), fmt_double(s.max));
    }
    if (!o.summary_out.empty()) {
        write_file_atomic(o.summary_out, summary_csv);
    }
    if (g.format == Format::Csv) {
        std::string out = "rep,file,method,value\n";
        for (const auto &r : res.rows) {
            out += fmt::format("{},{},{},{}\n", r.rep, r.file, r.method, fmt_double(r.value));
        }
        return out;
    }
    json rows = json::array();
    for (const auto &r : res.rows) {
        rows.push_back({{"rep", r.rep}, {"file", r.file}, {"method", r.method}, {"value", r.value}});
    }
    json summary = json::array();
    for (const auto &s : res.summary) {
        summary.push_back({{"method", s.method},
                           {"count", s.count},
                           {"mean", s.mean},
                           {"sd", s.sd},
                           {"min", s.min},
                           {"q25", s.q25},
                           {"median", s.median},
                           {"q75", s.q75},
                           {"max", s.max}});
    }
    json config = {{"n", cfg.n},       {"N", cfg.N},
                   {"L", cfg.L},       {"reps", cfg.reps},
                   {"seed", g.seed},   {"fixed_circuits", cfg.fixed_circuits}};
    return emit_json({{"config", config}, {"rows", rows}, {"summary", summary}});
}

std::string cmd_gof(const GlobalOptions &g, const GofOptions &o) {
    if (o.probs.empty() || o.sample.empty()) {
        throw UsageError("gof needs --probs and --sample");
    }
    if (o.phi.has_value() == o.fit_phi) {
        throw UsageError("gof needs exactly one of --phi or --fit-phi");
    }
    ProbabilityVector pv = read_probabilities(o.probs);
    Sample raw = read_sample(o.sample);
    if (pv.n() != raw.n) {
        throw DimensionError(fmt::format("probability file has n={}, sample has n={}", pv.n(), raw.n));
    }
    const std::uint64_t N = raw.total();
    const double phi = o.fit_phi ? min_chisq_phi(raw.counts, pv, N, o.min_expected) : *o.phi;
    ProbabilityVector pi = sampling_probs(BasicModel{phi}, pv);
    ChiSquareResult chi = chi_square(raw.counts, pi, N, o.fit_phi ? 1 : 0, o.min_expected);

    if (!o.hist.empty()) {
        HistogramSpec spec;
        spec.bins = o.bins;
        if (o.hist_scale == "z") {
            spec.scale = HistogramScale::Z;
        } else if (o.hist_scale != "w") {
            throw UsageError(fmt::format("--hist-scale must be w or z, got '{}'", o.hist_scale));
        }
        auto h = histogram(gather(pv, raw.indices), spec, static_cast<double>(pv.M()), phi);
        write_file_atomic(o.hist, histogram_csv(h));
    }
    if (!o.scatter.empty()) {
        auto pts = freq_scatter(raw.counts, pi, N);
        write_file_atomic(o.scatter, scatter_csv(pts));
    }
    if (g.format == Format::Csv) {
        return fmt::format("statistic,df,cells,cells_merged,p_value,log_p_value,phi\n{},{},{},{},{},{},{}\n",
                           fmt_double(chi.statistic), chi.df, chi.cells, chi.cells_merged, fmt_double(chi.p_value),
                           fmt_double(chi.log_p_value), fmt_double(phi));
    }
    return emit_json({{"chi_square", to_json(chi)}, {"phi", phi}, {"fit_phi", o.fit_phi}, {"n", pv.n()}, {"N", N}});
}

std::string cmd_predict(const GlobalOptions &g, const PredictOptions &o) {
    if (o.table) {
        if (g.format == Format::Csv) {
            std::string out = "n,predicted,avg_mle,avg_t\n";
            for (const auto &r : kReferenceTable) {
                out += fmt::format("{},{},{},{}\n", r.n, r.predicted, r.avg_mle, r.avg_t);
            }
            return out;
        }
        json rows = json::array();
        for (const auto &r : kReferenceTable) {
            rows.push_back({{"n", r.n}, {"predicted", r.predicted}, {"avg_mle", r.avg_mle}, {"avg_t", r.avg_t}});
        }
        return emit_json(rows);
    }
    json out;
    if (o.phi) {
        if (!o.n) {
            throw UsageError("--phi needs --n to split off the readout share");
        }
        auto gf = total_gate_fidelity(*o.phi, static_cast<unsigned>(*o.n), o.q);
        out = {{"phi", *o.phi}, {"n", *o.n}, {"q", o.q}, {"phi_g", gf.phi_g}, {"phi_ro", gf.phi_ro}};
    } else if (!o.profile.empty()) {
        if (o.n_g1 || o.n_g2 || o.n) {
            throw UsageError("--profile cannot be combined with --n-g1/--n-g2/--n");
        }
        CircuitErrorProfile p = profile_from_json(read_file_text(o.profile));
        out = {{"fidelity", fidelity_formula77(p)}};
    } else {
        out = {{"fidelity", fidelity_simple(o.n_g1.value_or(0), o.n_g2.value_or(0), o.n.value_or(0))},
               {"n_g1", o.n_g1.value_or(0)},
               {"n_g2", o.n_g2.value_or(0)},
               {"n", o.n.value_or(0)}};
    }
    if (g.format == Format::Csv) {
        std::string header, row;
        for (const auto &[k, v] : out.items()) {
            header += (header.empty() ? "" : ",") + k;
            row += (row.empty() ? "" : ",") + v.dump();
        }
        return header + "\n" + row + "\n";
    }
    return emit_json(out);
}

std::string cmd_ci(const GlobalOptions &g, const CiOptions &o) {
    ConfidenceInterval ci;
    if (!o.estimates.empty() || !o.sigmas.empty()) {
        ci = ci_conditional_combined(o.estimates, o.sigmas);
    } else if (o.sigma) {
        if (!o.estimate) {
            throw UsageError("--sigma needs --estimate");
        }
        ci = ci_conditional_single(*o.estimate, *o.sigma);
    } else {
        if (!o.estimate || o.method.empty() || !o.N || !o.n) {
            throw UsageError("an unconditional interval needs --method, --estimate, --N and --n");
        }
        const Method m = parse_method(o.method);
        const double M = std::ldexp(1.0, static_cast<int>(*o.n));
        const double phi = o.phi ? *o.phi : std::clamp(*o.estimate, 0.0, 1.0 - 1e-12);
        ci = ci_unconditional(m, *o.estimate, phi, o.L, *o.N, M);
    }
    if (g.format == Format::Csv) {
        return fmt::format("kind,center,half_width,lower,upper,level\n{},{},{},{},{},{}\n", ci_kind_name(ci.kind),
                           fmt_double(ci.center), fmt_double(ci.half_width), fmt_double(ci.lower()),
                           fmt_double(ci.upper()), ci.level);
    }
    return emit_json(to_json(ci));
}

}  // namespace xebstats::cli
