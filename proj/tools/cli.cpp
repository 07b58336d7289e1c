#include "cli.hpp"

#include "kyt/certificate.hpp"
#include "kyt/commuting.hpp"
#include "kyt/decompose.hpp"
#include "kyt/error.hpp"
#include "kyt/io.hpp"
#include "kyt/rank_detect.hpp"
#include "kyt/sweep.hpp"
#include "kyt/tensor.hpp"

#include "CLI11.hpp"

#include <array>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace kyt::cli {

namespace {

struct TolFlags {
    double rank = 1e-9;
    double match = 1e-6;
    double solve = 1e-8;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol-rank", rank, "relative singular-value cutoff for rank");
        cmd->add_option("--tol-match", match, "scalar-multiple / eigenvalue-gap tolerance");
        cmd->add_option("--tol-solve", solve, "acceptable relative solve residual");
    }

    TolerancePolicy policy() const {
        TolerancePolicy tol{rank, match, solve};
        tol.validate();
        return tol;
    }
};

void add_seed_option(CLI::App* cmd, std::uint64_t& seed) {
    cmd->add_option("--seed", seed, "random seed")->envname("KY_SEED");
}

std::array<int, 3> as_dims(const std::vector<int>& values) {
    if (values.size() != 3 || values[0] < 1 || values[1] < 1 || values[2] < 1) {
        throw InvalidInput("--dims expects three positive integers n1,n2,n3");
    }
    return {values[0], values[1], values[2]};
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Tensor rank detection, certification and decomposition via "
                 "subset-indexed signed flattenings"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a planted random instance");
    std::vector<int> gen_dims;
    int gen_r = 1;
    std::uint64_t gen_seed = 1;
    std::string gen_out_tensor, gen_out_cp;
    gen->add_option("--dims", gen_dims, "tensor dimensions n1,n2,n3")
        ->required()
        ->delimiter(',');
    gen->add_option("--r", gen_r, "number of rank-1 terms")->required();
    add_seed_option(gen, gen_seed);
    gen->add_option("--out-tensor", gen_out_tensor, "tensor JSON output path");
    gen->add_option("--out-cp", gen_out_cp, "planted decomposition JSON output path");
    gen->callback([&] {
        const auto d = as_dims(gen_dims);
        if (gen_out_tensor.empty() && gen_out_cp.empty()) {
            throw InvalidInput("gen: give --out-tensor and/or --out-cp");
        }
        const CpDecomposition planted =
            random_generic_decomposition(d[0], d[1], d[2], gen_r, gen_seed);
        if (!gen_out_cp.empty()) save_cp(gen_out_cp, planted);
        if (!gen_out_tensor.empty()) save_tensor(gen_out_tensor, assemble(planted));
    });

    // ---- rank ---------------------------------------------------------
    auto* rank = app.add_subcommand("rank", "flattening-based rank detection");
    std::string rank_in, rank_out, rank_dump_matrix, rank_dump_maps;
    int rank_q = 0;
    TolFlags rank_tol;
    rank->add_option("--in", rank_in, "tensor JSON input")->required();
    rank->add_option("--q", rank_q, "number of mode-1 slices to use (default: largest "
                                    "odd q <= min(n1, 7))");
    rank->add_option("--out", rank_out, "report JSON output path (default: stdout)");
    rank->add_option("--dump-matrix", rank_dump_matrix, "debug dump of the flattening");
    rank->add_option("--dump-maps", rank_dump_maps, "sidecar index maps for the dump");
    rank_tol.attach(rank);
    rank->callback([&] {
        const Tensor3 t = load_tensor(rank_in);
        const int q = rank_q > 0 ? rank_q : default_q(t.n1());
        const RankReport report = detect_rank(t, q, rank_tol.policy());
        if (!rank_dump_matrix.empty()) {
            const std::string maps = rank_dump_maps.empty()
                                         ? rank_dump_matrix + ".maps.json"
                                         : rank_dump_maps;
            save_flattening_dump(rank_dump_matrix, maps,
                                 koszul_flattening(t, report.p, report.q));
        }
        const std::string text = to_json_string(report);
        if (rank_out.empty()) std::cout << text << '\n';
        else save_text(rank_out, text);
    });

    // ---- decompose ----------------------------------------------------
    auto* dec = app.add_subcommand("decompose", "recover the rank-1 terms");
    std::string dec_in, dec_out, dec_report;
    int dec_q = 0, dec_p = -1, dec_r = 0;
    std::uint64_t dec_seed = 1;
    TolFlags dec_tol;
    dec->add_option("--in", dec_in, "tensor JSON input")->required();
    dec->add_option("--q", dec_q, "number of mode-1 slices to use")->required();
    dec->add_option("--p", dec_p, "subset size (default: auto-balanced)");
    dec->add_option("--r", dec_r, "number of terms (default: learned from the flattening)");
    add_seed_option(dec, dec_seed);
    dec->add_option("--out", dec_out, "decomposition JSON output path")->required();
    dec->add_option("--report", dec_report, "pipeline report JSON output path");
    dec_tol.attach(dec);
    dec->callback([&] {
        const Tensor3 t = load_tensor(dec_in);
        DecompositionPlan plan;
        plan.q = dec_q;
        plan.p = dec_p >= 0 ? dec_p : balanced_p(dec_q, t.n2(), t.n3());
        if (dec_r > 0) plan.r = dec_r;
        plan.tol = dec_tol.policy();
        plan.seed = dec_seed;
        const DecomposeResult result = decompose_with_report(t, plan);
        save_cp(dec_out, result.decomposition);
        if (!dec_report.empty()) save_text(dec_report, to_json_string(result.report));
    });

    // ---- certify ------------------------------------------------------
    auto* cert = app.add_subcommand("certify", "check the uniqueness conditions of a "
                                               "decomposition");
    std::string cert_in, cert_out;
    int cert_q = 0, cert_p = -1;
    TolFlags cert_tol;
    cert->add_option("--cp", cert_in, "decomposition JSON input")->required();
    cert->add_option("--q", cert_q, "number of mode-1 slices to use")->required();
    cert->add_option("--p", cert_p, "subset size (default: auto-balanced)");
    cert->add_option("--out", cert_out, "certificate JSON output path (default: stdout)");
    cert_tol.attach(cert);
    cert->callback([&] {
        const CpDecomposition d = load_cp(cert_in);
        const int p = cert_p >= 0 ? cert_p : balanced_p(cert_q, d.n2(), d.n3());
        const UniquenessCertificate certificate =
            certify_uniqueness(d, p, cert_q, cert_tol.policy());
        const std::string text = to_json_string(certificate);
        if (cert_out.empty()) std::cout << text << '\n';
        else save_text(cert_out, text);
    });

    // ---- commext ------------------------------------------------------
    auto* comm = app.add_subcommand("commext", "commuting matrix extensions");
    comm->require_subcommand(1);

    auto* comm_gen = comm->add_subcommand("gen", "generate a planted instance");
    int cg_m = 0, cg_n = 0, cg_r = 0;
    std::uint64_t cg_seed = 1;
    std::string cg_out, cg_out_truth;
    comm_gen->add_option("--m", cg_m, "number of matrices")->required();
    comm_gen->add_option("--n", cg_n, "visible dimension")->required();
    comm_gen->add_option("--r", cg_r, "extension dimension")->required();
    add_seed_option(comm_gen, cg_seed);
    comm_gen->add_option("--out", cg_out, "visible blocks JSON output")->required();
    comm_gen->add_option("--out-truth", cg_out_truth, "planted extension JSON output");
    comm_gen->callback([&] {
        const CommExtInstance instance = generate_planted_instance(cg_m, cg_n, cg_r, cg_seed);
        save_matrix_list(cg_out, instance.visible, "n");
        if (!cg_out_truth.empty()) save_matrix_list(cg_out_truth, instance.planted, "r");
    });

    auto* comm_solve = comm->add_subcommand("solve", "find a commuting extension");
    std::string cs_in, cs_out;
    int cs_r = 0;
    std::uint64_t cs_seed = 1;
    TolFlags cs_tol;
    comm_solve->add_option("--in", cs_in, "visible blocks JSON input")->required();
    comm_solve->add_option("--r", cs_r, "extension dimension")->required();
    add_seed_option(comm_solve, cs_seed);
    comm_solve->add_option("--out", cs_out, "extension JSON output")->required();
    cs_tol.attach(comm_solve);
    comm_solve->callback([&] {
        const std::vector<MatrixXd> visible = load_matrix_list(cs_in);
        const CommExtSolution solution =
            solve_commuting_extension(visible, cs_r, cs_seed, cs_tol.policy());
        save_matrix_list(cs_out, solution.extensions, "r");
        std::cerr << "solved after " << solution.attempts << " mixing draw(s)\n";
    });

    auto* comm_verify = comm->add_subcommand("verify", "check a candidate extension");
    std::string cv_a, cv_z;
    double cv_tol = 1e-7;
    comm_verify->add_option("--a", cv_a, "visible blocks JSON input")->required();
    comm_verify->add_option("--z", cv_z, "candidate extension JSON input")->required();
    comm_verify->add_option("--tol", cv_tol, "acceptance tolerance on both residuals");
    bool verify_failed = false;
    comm_verify->callback([&] {
        const ExtensionReport report =
            verify_extension(load_matrix_list(cv_a), load_matrix_list(cv_z), cv_tol);
        std::cout << to_json_string(report) << '\n';
        verify_failed = !report.pass;
    });

    // ---- sweep --------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "empirical rank-additivity sweep");
    std::vector<std::string> sweep_dims;
    std::vector<int> sweep_q;
    int sweep_rmin = 1, sweep_rmax = 1, sweep_seeds = 1, sweep_workers = 1;
    std::uint64_t sweep_seed = 1;
    std::size_t sweep_budget = 40'000'000;
    std::string sweep_out;
    TolFlags sweep_tol;
    sweep->add_option("--dims", sweep_dims, "tensor dimensions n1,n2,n3 (repeatable)")
        ->required();
    sweep->add_option("--q", sweep_q, "q values (repeatable)")->required();
    sweep->add_option("--r-min", sweep_rmin, "smallest planted rank");
    sweep->add_option("--r-max", sweep_rmax, "largest planted rank")->required();
    sweep->add_option("--seeds", sweep_seeds, "seeds per grid point");
    add_seed_option(sweep, sweep_seed);
    sweep->add_option("--workers", sweep_workers, "parallel workers");
    sweep->add_option("--entry-budget", sweep_budget,
                      "refuse flattenings with more entries than this");
    sweep->add_option("--out", sweep_out, "CSV output path")->required();
    sweep_tol.attach(sweep);
    sweep->callback([&] {
        SweepConfig config;
        for (const std::string& spec : sweep_dims) {
            std::vector<int> values;
            std::size_t pos = 0;
            try {
                while (pos < spec.size()) {
                    std::size_t used = 0;
                    values.push_back(std::stoi(spec.substr(pos), &used));
                    pos += used + 1;
                }
            } catch (const std::exception&) {
                throw InvalidInput("--dims: cannot parse '" + spec + "'");
            }
            config.dims.push_back(as_dims(values));
        }
        config.q_values = sweep_q;
        config.r_min = sweep_rmin;
        config.r_max = sweep_rmax;
        config.seeds = sweep_seeds;
        config.base_seed = sweep_seed;
        config.tol = sweep_tol.policy();
        config.entry_budget = sweep_budget;
        config.workers = sweep_workers;
        const SweepResult result = run_sweep(config);
        save_text(sweep_out, sweep_csv(result));
        std::cout << sweep_summary_text(result);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const AlgorithmFail& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return verify_failed ? 2 : 0;
}

} // namespace kyt::cli
