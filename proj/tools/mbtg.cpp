#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mbtg/coverage.hpp"
#include "mbtg/frontend.hpp"
#include "mbtg/procgen.hpp"
#include "mbtg/tracing.hpp"

namespace fs = std::filesystem;
using namespace mbtg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

Model load_model(const std::string& path) {
    if (!fs::exists(path)) throw std::runtime_error("model file not found: " + path);
    Model m = parse_model(slurp(path), path);
    std::vector<Diagnostic> diags = validate(m);
    if (!diags.empty()) {
        for (const Diagnostic& d : diags) std::cerr << d.element << ": " << d.message << "\n";
        throw std::runtime_error("model validation failed (" + std::to_string(diags.size()) +
                                 " diagnostics)");
    }
    return m;
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Sat: return "sat";
        case SolveStatus::UnsatAtBound: return "unsat-at-bound";
        case SolveStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

struct RunConfig {
    std::string model_path;
    std::vector<std::string> strategies;
    int level = 1;
    int bound = 12;
    uint64_t seed = 0;
    std::string out_dir = "mbtg-out";
    std::string mode = "strict";
    std::string tolerances_path;
    std::string logs_dir;
    int jobs = 1;
};

int cmd_validate(const std::string& path) {
    if (!fs::exists(path)) {
        std::cerr << "model file not found: " << path << "\n";
        return kExitUsage;
    }
    Model m = parse_model(slurp(path), path);
    std::vector<Diagnostic> diags = validate(m);
    for (const Diagnostic& d : diags) std::cerr << d.element << ": " << d.message << "\n";
    return diags.empty() ? kExitOk : kExitVerdict;
}

ToleranceSpec load_tolerances(const RunConfig& cfg, const Model& m) {
    if (cfg.tolerances_path.empty())
        throw std::runtime_error("tolerant mode needs --tolerances FILE");
    if (!fs::exists(cfg.tolerances_path))
        throw std::runtime_error("tolerance file not found: " + cfg.tolerances_path);
    return parse_tolerances(slurp(cfg.tolerances_path), m, cfg.tolerances_path);
}

int cmd_generate(const RunConfig& cfg) {
    Model m = load_model(cfg.model_path);
    fs::create_directories(fs::path(cfg.out_dir) / "procedures");

    ToleranceSpec tol;
    TestProcedure::Mode mode =
        cfg.mode == "tolerant" ? TestProcedure::Tolerant : TestProcedure::Strict;
    if (mode == TestProcedure::Tolerant) tol = load_tolerances(cfg, m);

    Solver solver(m, {cfg.bound, 2'000'000, cfg.seed});

    std::ostringstream manifest;
    manifest << "model " << cfg.model_path << "\n"
             << "level " << cfg.level << "\nbound " << cfg.bound << "\nseed " << cfg.seed
             << "\nmode " << cfg.mode << "\n";

    if (cfg.strategies.empty()) {
        // requirements-only campaign: one witness per requirement constraint
        std::ostringstream report;
        bool all_sat = true;
        for (const Requirement& req : m.requirements) {
            LtlFormula phi = characterize(req, m);
            SolveResult r = solver.solve(phi);
            report << req.id << "\t" << status_name(r.status) << "\t" << to_string(phi) << "\n";
            if (r.status != SolveStatus::Sat) {
                all_sat = false;
                continue;
            }
            TestProcedure p = emit(m, *r.witness, req.id, {}, mode,
                                   mode == TestProcedure::Tolerant ? &tol : nullptr);
            spit(fs::path(cfg.out_dir) / "procedures" / (req.id + ".proc"),
                 print_procedure(m, p));
            manifest << "procedure procedures/" << req.id << ".proc\n";
        }
        spit(fs::path(cfg.out_dir) / "requirements.txt", report.str());
        spit(fs::path(cfg.out_dir) / "manifest.txt", manifest.str());
        return all_sat ? kExitOk : kExitVerdict;
    }

    std::vector<SymbolicTestCase> cases;
    for (const std::string& name : cfg.strategies)
        for (SymbolicTestCase& tc : gen(strategy_from_string(name), m))
            cases.push_back(std::move(tc));
    for (size_t i = 0; i < cases.size(); ++i) cases[i].id = static_cast<int>(i);

    CompileResult compiled = compile_traceability(m, std::move(cases), solver);
    std::vector<int> suite =
        select_suite(compiled, static_cast<AssuranceLevel>(cfg.level), m);

    std::ostringstream report;
    for (int id : suite) {
        const SymbolicTestCase& tc = compiled.cases[static_cast<size_t>(id)];
        SolveResult r = solver.solve(tc.formula);
        report << "tc" << id << "\tstrategy=" << to_string(tc.strategy)
               << "\tlevel=" << tc.refinement_level << "\tstatus=" << status_name(r.status)
               << "\treqs=";
        for (size_t i = 0; i < tc.requirements.size(); ++i)
            report << (i ? "," : "") << tc.requirements[i];
        report << "\tformula=" << to_string(tc.formula) << "\n";
        if (r.status == SolveStatus::Sat) {
            TestProcedure p = emit(m, *r.witness, "tc" + std::to_string(id), {id}, mode,
                                   mode == TestProcedure::Tolerant ? &tol : nullptr);
            spit(fs::path(cfg.out_dir) / "procedures" / ("tc" + std::to_string(id) + ".proc"),
                 print_procedure(m, p));
            manifest << "procedure procedures/tc" << id << ".proc\n";
        }
    }
    std::ostringstream suite_txt;
    for (int id : suite) suite_txt << id << "\n";
    spit(fs::path(cfg.out_dir) / "cases.txt", report.str());
    spit(fs::path(cfg.out_dir) / "suite.txt", suite_txt.str());
    spit(fs::path(cfg.out_dir) / "matrix.txt", export_matrix(compiled));
    spit(fs::path(cfg.out_dir) / "manifest.txt", manifest.str());
    return kExitOk;
}

int cmd_run(const RunConfig& cfg) {
    Model m = load_model(cfg.model_path);
    fs::path dir = fs::path(cfg.out_dir) / "procedures";
    if (!fs::is_directory(dir)) throw std::runtime_error("no procedures directory: " + dir.string());

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".proc") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    struct Row {
        std::string id;
        Verdict verdict;
    };
    std::vector<Row> rows(files.size());
    std::mutex err_mutex;
    std::vector<std::string> errors;

    auto worker = [&](size_t begin, size_t stride) {
        for (size_t i = begin; i < files.size(); i += stride) {
            try {
                TestProcedure p = parse_procedure(slurp(files[i]), m, files[i].string());
                ExecutionResult r;
                if (!cfg.logs_dir.empty()) {
                    fs::path logp = fs::path(cfg.logs_dir) / (p.id + ".log");
                    if (!fs::exists(logp))
                        throw AdapterFailure("missing external log: " + logp.string());
                    r = execute(p, m, parse_trace_log(slurp(logp), m, logp.string()));
                } else {
                    r = execute(p, m, m);
                }
                rows[i] = {p.id, r.verdict};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                errors.push_back(files[i].string() + ": " + e.what());
            }
        }
    };
    size_t jobs = std::max(1, cfg.jobs);
    if (jobs <= 1 || files.size() <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (size_t j = 0; j < std::min(jobs, files.size()); ++j)
            pool.emplace_back(worker, j, std::min(jobs, files.size()));
        for (std::thread& t : pool) t.join();
    }
    if (!errors.empty()) {
        for (const std::string& e : errors) std::cerr << e << "\n";
        return kExitInternal;
    }

    int failed = 0;
    for (const Row& r : rows) {
        if (r.verdict.pass) {
            std::cout << r.id << "\tpass\n";
        } else {
            ++failed;
            std::cout << r.id << "\tFAIL\t" << r.verdict.output << " at t=" << r.verdict.time
                      << " (" << r.verdict.oracle_state << "): " << r.verdict.detail << "\n";
        }
    }
    std::cout << "total " << rows.size() << ", failed " << failed << "\n";
    return failed == 0 ? kExitOk : kExitVerdict;
}

int cmd_trace_matrix(const RunConfig& cfg) {
    Model m = load_model(cfg.model_path);
    Solver solver(m, {cfg.bound, 2'000'000, cfg.seed});
    std::vector<SymbolicTestCase> cases;
    if (cfg.strategies.empty()) {
        cases = gen_all(m);
    } else {
        for (const std::string& name : cfg.strategies)
            for (SymbolicTestCase& tc : gen(strategy_from_string(name), m))
                cases.push_back(std::move(tc));
        for (size_t i = 0; i < cases.size(); ++i) cases[i].id = static_cast<int>(i);
    }
    CompileResult compiled = compile_traceability(m, std::move(cases), solver);
    std::cout << export_matrix(compiled);
    return compiled.matrix.uncovered.empty() ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"model-based test generation"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto add_common = [&](CLI::App* sub, bool needs_model = true) {
        auto* opt = sub->add_option("--model", cfg.model_path, "model file");
        if (needs_model) opt->required();
        sub->add_option("--strategy", cfg.strategies, "coverage strategies")->delimiter(',');
        sub->add_option("--level", cfg.level, "assurance level")
            ->check(CLI::IsMember({1, 2, 3, 45}));
        sub->add_option("--bound", cfg.bound, "BMC bound k_max");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--mode", cfg.mode, "conformance mode")
            ->check(CLI::IsMember({"strict", "tolerant"}));
        sub->add_option("--tolerances", cfg.tolerances_path, "tolerance file");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--jobs", cfg.jobs, "worker count");
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a model");
    validate_cmd->add_option("--model", cfg.model_path, "model file")->required();

    CLI::App* generate_cmd = app.add_subcommand("generate", "generate test cases and procedures");
    add_common(generate_cmd);

    CLI::App* run_cmd = app.add_subcommand("run", "execute generated procedures");
    add_common(run_cmd);
    run_cmd->add_option("--logs", cfg.logs_dir, "external trace log directory");

    CLI::App* matrix_cmd = app.add_subcommand("trace-matrix", "print the traceability matrix");
    add_common(matrix_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(cfg.model_path);
        if (generate_cmd->parsed()) return cmd_generate(cfg);
        if (run_cmd->parsed()) return cmd_run(cfg);
        if (matrix_cmd->parsed()) return cmd_trace_matrix(cfg);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
