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

#include "xebstats/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "xebstats/errors.hpp"

namespace xebstats {

namespace {

bool needs_symmetric_readout(Method m) {
    return m == Method::ReadoutMoment || m == Method::ReadoutMLE || m == Method::PhiRoTilde;
}

bool needs_components(Method m) { return m == Method::GeneralMoment || m == Method::GeneralMLE; }

NoiseModel to_noise_model(const ModelSpec &spec, std::vector<ProbabilityVector> components) {
    switch (spec.kind) {
        case ModelSpec::Kind::Basic:
            return BasicModel{spec.phi};
        case ModelSpec::Kind::GeneralP:
            return GeneralPModel{spec.phis, std::move(components)};
        case ModelSpec::Kind::ReadoutSymmetric:
            return ReadoutSymmetricModel{spec.phi, spec.phi_ro, spec.q};
        case ModelSpec::Kind::ReadoutAsymmetric:
            return ReadoutAsymmetricModel{spec.phi_g, spec.q1, spec.q2};
    }
    throw UsageError("unknown model kind");
}

std::vector<ExperimentRow> run_pipeline(const ExperimentConfig &cfg, unsigned rep, unsigned file) {
    const unsigned n = cfg.n;
    const double M = std::ldexp(1.0, static_cast<int>(n));
    ProbabilityVector pv = gen_porter_thomas(n, generation_seed(cfg, rep, file));

    std::vector<ProbabilityVector> components;
    if (cfg.model.kind == ModelSpec::Kind::GeneralP) {
        components.push_back(pv);
        for (std::size_t k = 1; k < cfg.model.phis.size(); ++k) {
            components.push_back(gen_porter_thomas(n, generation_seed(cfg, rep, file, k)));
        }
    }
    const NoiseModel model = to_noise_model(cfg.model, components);
    std::optional<ProbabilityVector> v;
    if (cfg.model.kind == ModelSpec::Kind::ReadoutSymmetric) {
        v = readout_noise_vector(pv, cfg.model.q);
    }
    Sample sample;
    {
        ProbabilityVector pi = sampling_probs(model, pv);
        sample = draw_sample(pi, &pv, v ? &*v : nullptr, cfg.N, sampling_seed(cfg, rep, file));
    }

    std::optional<MomentSummary> mom;
    std::vector<ExperimentRow> rows;
    for (Method m : cfg.estimators) {
        Estimate e;
        switch (m) {
            case Method::U:
                e = estimator_U(sample.sampled_w, M);
                break;
            case Method::V:
                if (!mom) {
                    mom = moments(pv);
                }
                e = estimator_V(sample.sampled_w, M, mom->w2);
                break;
            case Method::LogU:
                e = estimator_log(sample.sampled_w, M);
                break;
            case Method::MLE:
                e = mle_basic(sample.sampled_w, M);
                break;
            case Method::T:
                e = estimator_T(sample.counts, M, sample.total());
                break;
            case Method::GeneralMoment:
            case Method::GeneralMLE: {
                std::vector<std::vector<double>> per_component;
                for (const auto &c : components) {
                    per_component.push_back(gather(c, sample.indices));
                }
                e = m == Method::GeneralMoment ? estimator_general_moment(per_component, M, components)
                                               : mle_general(per_component, M);
                break;
            }
            case Method::ReadoutMoment:
                e = estimator_readout_moment(sample.sampled_w, *sample.sampled_v, pv, *v);
                break;
            case Method::ReadoutMLE:
                e = mle_readout(sample.sampled_w, *sample.sampled_v, M);
                break;
            case Method::PhiRoTilde:
                e = estimator_phi_ro_tilde(statistic_W(*sample.sampled_v, M), readout_constants(n, cfg.model.q, M));
                break;
            case Method::AsymmetricMLE:
                e = mle_asymmetric(sample.counts, pv);
                break;
        }
        for (auto &[name, value] : estimate_columns(e)) {
            rows.push_back({rep, file, std::move(name), value});
        }
    }
    return rows;
}

double quantile(const std::vector<double> &sorted, double p) {
    if (sorted.size() == 1) {
        return sorted[0];
    }
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow> &rows, unsigned reps) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> sums;
    std::map<std::string, std::vector<unsigned>> counts;
    for (const auto &r : rows) {
        auto [it, inserted] = sums.try_emplace(r.method, std::vector<double>(reps, 0.0));
        if (inserted) {
            order.push_back(r.method);
            counts[r.method].assign(reps, 0);
        }
        it->second[r.rep] += r.value;
        counts[r.method][r.rep] += 1;
    }
    std::vector<SummaryRow> out;
    for (const auto &name : order) {
        std::vector<double> avgs;
        for (unsigned r = 0; r < reps; ++r) {
            if (counts[name][r] > 0) {
                avgs.push_back(sums[name][r] / counts[name][r]);
            }
        }
        std::sort(avgs.begin(), avgs.end());
        double mean = 0;
        for (double a : avgs) {
            mean += a;
        }
        mean /= static_cast<double>(avgs.size());
        double ss = 0;
        for (double a : avgs) {
            ss += (a - mean) * (a - mean);
        }
        const double sd = avgs.size() > 1 ? std::sqrt(ss / static_cast<double>(avgs.size() - 1)) : 0.0;
        out.push_back({name, avgs.size(), mean, sd, avgs.front(), quantile(avgs, 0.25), quantile(avgs, 0.5),
                       quantile(avgs, 0.75), avgs.back()});
    }
    return out;
}

}  // namespace

SeedSpec generation_seed(const ExperimentConfig &cfg, unsigned rep, unsigned file, std::uint64_t component) {
    const std::uint64_t stream = cfg.fixed_circuits ? file : static_cast<std::uint64_t>(rep) * cfg.L + file;
    return SeedSpec{cfg.base_seed, stream}.purpose(kGenerationStream + (component << 8));
}

SeedSpec sampling_seed(const ExperimentConfig &cfg, unsigned rep, unsigned file) {
    return SeedSpec{cfg.base_seed, static_cast<std::uint64_t>(rep) * cfg.L + file}.purpose(kSamplingStream);
}

std::vector<std::pair<std::string, double>> estimate_columns(const Estimate &e) {
    const std::string base(method_name(e.method));
    std::vector<std::pair<std::string, double>> out;
    auto names = [&]() -> std::vector<std::string> {
        switch (e.method) {
            case Method::ReadoutMoment:
            case Method::ReadoutMLE:
                return {"phi", "phi_ro"};
            case Method::AsymmetricMLE:
                return {"phi_g", "q1", "q2"};
            default: {
                std::vector<std::string> v;
                for (std::size_t k = 0; k < e.value.size(); ++k) {
                    v.push_back(fmt::format("phi{}", k + 1));
                }
                return v;
            }
        }
    }();
    if (e.value.size() == 1) {
        out.emplace_back(base, e.value[0]);
    } else {
        for (std::size_t k = 0; k < e.value.size(); ++k) {
            out.emplace_back(base + ":" + names[k], e.value[k]);
        }
    }
    if (auto it = e.aux.find("T2"); it != e.aux.end() && e.method == Method::T) {
        out.emplace_back(base + ":T2", it->second);
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    if (cfg.reps < 1 || cfg.L < 1 || cfg.workers < 1) {
        throw UsageError("reps, L and workers must all be at least 1");
    }
    if (cfg.n > 26 && !cfg.allow_large) {
        throw UsageError(fmt::format("n = {} needs more than 1.5 GiB per pipeline; pass --allow-large to proceed", cfg.n));
    }
    if (cfg.N < 2) {
        throw UsageError("N must be at least 2");
    }
    for (Method m : cfg.estimators) {
        if (needs_symmetric_readout(m) && cfg.model.kind != ModelSpec::Kind::ReadoutSymmetric) {
            throw UsageError(fmt::format("{} needs the symmetric readout model (--phi, --phi-ro, --q)", method_name(m)));
        }
        if (needs_components(m) && cfg.model.kind != ModelSpec::Kind::GeneralP) {
            throw UsageError(fmt::format("{} needs the general-p model (--phis)", method_name(m)));
        }
    }
    // Validate the model once before spawning work.
    if (cfg.model.kind != ModelSpec::Kind::GeneralP) {
        validate(to_noise_model(cfg.model, {}));
    }

    const std::size_t tasks = static_cast<std::size_t>(cfg.reps) * cfg.L;
    std::vector<std::vector<ExperimentRow>> results(tasks);
    std::vector<std::exception_ptr> errors(tasks);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks || failed.load()) {
                return;
            }
            const auto rep = static_cast<unsigned>(t / cfg.L);
            const auto file = static_cast<unsigned>(t % cfg.L);
            try {
                results[t] = run_pipeline(cfg, rep, file);
            } catch (...) {
                errors[t] = std::current_exception();
                failed.store(true);
            }
        }
    };
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(cfg.workers, tasks));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (std::size_t t = 0; t < tasks; ++t) {
        if (!errors[t]) {
            continue;
        }
        const auto rep = static_cast<unsigned>(t / cfg.L);
        const auto file = static_cast<unsigned>(t % cfg.L);
        const std::string where = fmt::format("replicate rep={} file={} (base seed {}, stream {})", rep, file,
                                              cfg.base_seed, static_cast<std::uint64_t>(rep) * cfg.L + file);
        try {
            std::rethrow_exception(errors[t]);
        } catch (const ConvergenceError &e) {
            throw ConvergenceError(fmt::format("{}: {}", where, e.what()));
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::Usage) {
                throw UsageError(fmt::format("{}: {}", where, e.what()));
            }
            throw DomainError(fmt::format("{}: {}", where, e.what()));
        } catch (const std::exception &e) {
            throw DomainError(fmt::format("{}: {}", where, e.what()));
        }
    }

    ExperimentResult out;
    for (auto &r : results) {
        out.rows.insert(out.rows.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    out.summary = summarize(out.rows, cfg.reps);
    return out;
}

}  // namespace xebstats
