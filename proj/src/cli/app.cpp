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

#include "xebstats/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/io.hpp"

namespace xebstats::cli {

namespace {

unsigned default_workers() {
    const char *env = std::getenv("XEBSTATS_WORKERS");
    if (!env) {
        return 1;
    }
    std::string_view s(env);
    unsigned w = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
    if (ec != std::errc{} || ptr != s.data() + s.size() || w == 0) {
        throw UsageError("XEBSTATS_WORKERS must be a positive integer");
    }
    return w;
}

void add_model_flags(CLI::App *cmd, ModelFlags &m) {
    cmd->add_option("--phi", m.phi, "fidelity of the basic or symmetric readout model")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--phi-ro", m.phi_ro, "readout-only fidelity (symmetric readout model)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--q", m.q, "symmetric readout flip rate")->check(CLI::Range(0.0, 0.5));
    cmd->add_option("--phi-g", m.phi_g, "total gate fidelity (asymmetric readout model)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--q1", m.q1, "P(1 read as 0)")->check(CLI::Range(0.0, 0.5));
    cmd->add_option("--q2", m.q2, "P(0 read as 1)")->check(CLI::Range(0.0, 0.5));
    cmd->add_option("--phis", m.phis, "mixture weights of the general-p model")->delimiter(',');
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Fidelity estimation from cross-entropy benchmarking samples", "xebstats"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string format = "json";
    app.add_option("--seed", seed, "base seed");
    app.add_option("--workers", workers, "worker threads (default: XEBSTATS_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output file (written atomically)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

    GenOptions gen;
    auto *c_gen = app.add_subcommand("gen", "generate a Porter-Thomas probability vector");
    c_gen->add_option("--n", gen.n, "qubits")->required()->check(CLI::Range(1u, kMaxQubits));
    c_gen->add_option("--stream", gen.stream, "stream index");
    c_gen->add_flag("--text", gen.text, "write the text format instead of binary");

    SampleOptions sample;
    auto *c_sample = app.add_subcommand("sample", "draw bitstrings from a noise model");
    c_sample->add_option("--probs", sample.probs, "ideal probability vector");
    add_model_flags(c_sample, sample.model);
    c_sample->add_option("--components", sample.components, "component vectors of the general-p model")
        ->delimiter(',');
    c_sample->add_option("--rejection-file", sample.rejection_file, "per-bitstring acceptance probabilities");
    c_sample->add_option("--N", sample.N, "number of kept draws")->required();
    c_sample->add_option("--stream", sample.stream, "stream index");
    c_sample->add_option("--v-out", sample.v_out, "also write the readout noise vector v");

    EstimateOptions est;
    auto *c_est = app.add_subcommand("estimate", "estimate fidelity from a sample");
    c_est->add_option("--probs", est.probs, "ideal probability vector");
    c_est->add_option("--sample", est.sample, "sample file")->required();
    c_est->add_option("--v-file", est.v_file, "readout noise vector v");
    c_est->add_option("--q", est.q, "readout flip rate (derives v from --probs)")->check(CLI::Range(0.0, 0.5));
    c_est->add_option("--method", est.methods, "estimators, or 'all'")->delimiter(',');
    c_est->add_option("--components", est.components, "component vectors for the general-p estimators")
        ->delimiter(',');

    McOptions mc;
    auto *c_mc = app.add_subcommand("mc", "Monte Carlo study over random circuits");
    c_mc->add_option("--n", mc.n, "qubits")->check(CLI::Range(1u, kMaxQubits));
    c_mc->add_option("--N", mc.N, "samples per file");
    c_mc->add_option("--L", mc.L, "files per repetition")->check(CLI::PositiveNumber);
    c_mc->add_option("--reps", mc.reps, "repetitions")->check(CLI::PositiveNumber);
    add_model_flags(c_mc, mc.model);
    c_mc->add_option("--estimators", mc.methods, "estimators to run")->delimiter(',');
    c_mc->add_flag("--fixed-circuits", mc.fixed_circuits, "reuse the same L vectors in every repetition");
    c_mc->add_flag("--allow-large", mc.allow_large, "permit n > 26");
    c_mc->add_option("--summary-out", mc.summary_out, "write the per-method summary CSV");

    GofOptions gof;
    auto *c_gof = app.add_subcommand("gof", "goodness of fit of the basic model");
    c_gof->add_option("--probs", gof.probs, "ideal probability vector")->required();
    c_gof->add_option("--sample", gof.sample, "sample file")->required();
    c_gof->add_option("--phi", gof.phi, "model fidelity")->check(CLI::Range(0.0, 1.0));
    c_gof->add_flag("--fit-phi", gof.fit_phi, "use the minimum chi-square phi");
    c_gof->add_option("--min-expected", gof.min_expected, "pooling threshold")->check(CLI::PositiveNumber);
    c_gof->add_option("--hist", gof.hist, "write a histogram CSV");
    c_gof->add_option("--hist-scale", gof.hist_scale, "w or z")->check(CLI::IsMember({"w", "z"}));
    c_gof->add_option("--bins", gof.bins, "histogram bins")->check(CLI::PositiveNumber);
    c_gof->add_option("--scatter", gof.scatter, "write an expected-vs-observed CSV");

    PredictOptions pred;
    auto *c_pred = app.add_subcommand("predict", "predicted circuit fidelity");
    c_pred->add_option("--n-g1", pred.n_g1, "1-qubit gate count");
    c_pred->add_option("--n-g2", pred.n_g2, "2-qubit gate count");
    c_pred->add_option("--n", pred.n, "qubits");
    c_pred->add_option("--profile", pred.profile, "JSON file with e_g1, e_g2 and e_q lists");
    c_pred->add_flag("--table", pred.table, "print the reference table");
    c_pred->add_option("--phi", pred.phi, "split a measured fidelity into gate and readout parts")
        ->check(CLI::Range(0.0, 1.0));
    c_pred->add_option("--q", pred.q, "readout error rate")->check(CLI::Range(0.0, 0.5));

    CiOptions ci;
    auto *c_ci = app.add_subcommand("ci", "confidence intervals");
    c_ci->add_option("--method", ci.method, "U, V or MLE (unconditional interval)");
    c_ci->add_option("--estimate", ci.estimate, "point estimate");
    c_ci->add_option("--sigma", ci.sigma, "standard error of --estimate");
    c_ci->add_option("--estimates", ci.estimates, "per-file estimates")->delimiter(',');
    c_ci->add_option("--sigmas", ci.sigmas, "per-file standard errors")->delimiter(',');
    c_ci->add_option("--phi", ci.phi, "plug-in fidelity (default: the estimate)");
    c_ci->add_option("--L", ci.L, "files averaged")->check(CLI::PositiveNumber);
    c_ci->add_option("--N", ci.N, "samples per file");
    c_ci->add_option("--n", ci.n, "qubits")->check(CLI::Range(1u, kMaxQubits));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        g.seed_given = seed.has_value();
        g.seed = seed.value_or(0);
        g.workers = workers ? *workers : default_workers();
        g.format = format == "csv" ? Format::Csv : Format::Json;

        std::string doc;
        bool writes_own_output = false;
        if (c_gen->parsed()) {
            doc = cmd_gen(g, gen);
            writes_own_output = true;
        } else if (c_sample->parsed()) {
            doc = cmd_sample(g, sample);
            writes_own_output = true;
        } else if (c_est->parsed()) {
            doc = cmd_estimate(g, est);
        } else if (c_mc->parsed()) {
            doc = cmd_mc(g, mc);
        } else if (c_gof->parsed()) {
            doc = cmd_gof(g, gof);
        } else if (c_pred->parsed()) {
            doc = cmd_predict(g, pred);
        } else if (c_ci->parsed()) {
            doc = cmd_ci(g, ci);
        }
        if (!writes_own_output) {
            if (g.out.empty()) {
                out << doc;
            } else {
                write_file_atomic(g.out, doc);
            }
        }
        return kExitOk;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Usage:
                return kExitUsage;
            case ErrorKind::Convergence:
                return kExitConvergence;
            case ErrorKind::Data:
                return kExitData;
        }
        return kExitData;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

int run(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace xebstats::cli
