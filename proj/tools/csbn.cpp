#include <algorithm>
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csbn/csbn.hpp"
#include "csbn/serialize.hpp"

namespace fs = std::filesystem;
using namespace csbn;

namespace {

enum Exit { exit_ok = 0, exit_internal = 1, exit_usage = 2, exit_data = 3, exit_numerical = 4 };

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON config: flat keys apply to the selected subcommand, an object keyed by
// a subcommand name applies to that subcommand only. Flags given on the
// command line win, since CLI11 only fills options that are still unset.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* root) : root_(root) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        std::string active;
        for (const CLI::App* sub : root_->get_subcommands()) active = sub->get_name();
        std::vector<CLI::ConfigItem> out;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object()) {
                for (auto kt = it.value().begin(); kt != it.value().end(); ++kt) {
                    out.push_back(item({it.key()}, kt.key(), kt.value()));
                }
            } else {
                out.push_back(item(active.empty() ? std::vector<std::string>{} : std::vector<std::string>{active},
                                   it.key(), it.value()));
            }
        }
        return out;
    }

private:
    static std::string scalar(const nlohmann::json& v, const std::string& key) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("config key '" + key + "' must be a scalar or a list of scalars");
    }

    static CLI::ConfigItem item(std::vector<std::string> parents, std::string key, const nlohmann::json& v) {
        std::replace(key.begin(), key.end(), '_', '-');
        CLI::ConfigItem ci;
        ci.parents = std::move(parents);
        ci.name = key;
        if (v.is_array()) {
            for (const auto& e : v) ci.inputs.push_back(scalar(e, key));
        } else {
            ci.inputs.push_back(scalar(v, key));
        }
        return ci;
    }

    const CLI::App* root_;
};

// ---------------------------------------------------------------------------

struct EstimatorFlags {
    double a = 3.7;
    double outer_tol = 1e-4;
    int max_outer_iters = 100;
    double nr_tol = 1e-8;
    int nr_max_iters = 50;
    double zero_threshold = default_zero_threshold;
    int grid_size = 20;
    double grid_ratio = 0.01;
    double alpha = 0.1;
    std::string selector = "auto";

    void add(CLI::App* app) {
        app->add_option("--a", a, "SCAD shape parameter")->capture_default_str();
        app->add_option("--outer-tol", outer_tol, "outer-loop stopping tolerance")->capture_default_str();
        app->add_option("--max-outer-iters", max_outer_iters, "outer-loop iteration cap")->capture_default_str();
        app->add_option("--nr-tol", nr_tol, "Newton-Raphson tolerance")->capture_default_str();
        app->add_option("--nr-max-iters", nr_max_iters, "Newton-Raphson iteration cap")->capture_default_str();
        app->add_option("--zero-threshold", zero_threshold, "|beta| below this is no edge")->capture_default_str();
        app->add_option("--grid-size", grid_size, "lambda grid length for --lambda auto")->capture_default_str();
        app->add_option("--grid-ratio", grid_ratio, "smallest/largest lambda on the grid")->capture_default_str();
        app->add_option("--alpha", alpha, "RCP threshold")->capture_default_str();
        app->add_option("--selector", selector, "lambda selector for --lambda auto")
            ->check(CLI::IsMember({"auto", "sic", "rcp"}))
            ->capture_default_str();
    }

    EstimatorConfig config(double lambda) const {
        EstimatorConfig cfg;
        cfg.penalty = PenaltyParams(lambda, a);
        cfg.outer_tol = outer_tol;
        cfg.max_outer_iters = max_outer_iters;
        cfg.nr_tol = nr_tol;
        cfg.nr_max_iters = nr_max_iters;
        cfg.zero_threshold = zero_threshold;
        cfg.check();
        return cfg;
    }
};

std::optional<double> parse_lambda(const std::string& s) {
    if (s == "auto") return std::nullopt;
    const auto v = detail::parse_double(s);
    if (!v) throw usage_error("--lambda must be a number or 'auto', got '" + s + "'");
    return *v;
}

struct Estimate {
    FitResult fit;
    std::optional<TuningResult> tuning;
};

Estimate run_estimate(Method m, const DataSet& ds, const ErrorSpec& es, const std::optional<double>& lambda,
                      const EstimatorFlags& ef, int jobs) {
    Estimate out;
    if (lambda) {
        EstimatorConfig cfg = ef.config(*lambda);
        cfg.threads = jobs;
        out.fit = fit(m, ds, es, cfg);
    } else {
        AutoLambda al;
        al.grid_size = ef.grid_size;
        al.grid_ratio = ef.grid_ratio;
        al.selector = parse_selector(ef.selector);
        al.rcp.alpha = ef.alpha;
        out.tuning = fit_auto(m, ds, es, ef.config(0.0), al, jobs);
        out.fit = out.tuning->fit;
    }
    if (!is_dag(graph_from_coefs(out.fit.b_hat, ef.zero_threshold))) {
        throw std::logic_error("estimated graph is not acyclic");
    }
    return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const std::string& n : names) {
        if (n == "all") {
            out = {Method::pcd_corrected, Method::pcd_naive, Method::nps};
            return out;
        }
        const Method m = parse_method(n);
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    std::sort(out.begin(), out.end(), [](Method a, Method b) { return static_cast<int>(a) < static_cast<int>(b); });
    return out;
}

std::string csv_quote(std::string s) {
    std::replace(s.begin(), s.end(), '"', '\'');
    return '"' + s + '"';
}

void write_json(const fs::path& path, const json& j) {
    auto out = detail::open_output(path.string());
    out << j.dump(2) << '\n';
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw data_error("cannot create output directory '" + dir + "': " + ec.message());
}

// "interventional": node variances from their own intervention blocks;
// "all-rows": plain column variances over every row.
Contaminated contaminate_calibrated(const SimulatedData& sim, const ContaminationSpec& spec,
                                    const std::string& calibration, std::uint64_t seed) {
    if (calibration == "all-rows") return contaminate(sim.x, spec, seed);
    return contaminate(sim.x, sim.intervened, spec, seed);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    Index p = 10;
    std::optional<Index> edges;
    Index max_parents = 4;
    Index n_per_node = 5;
    double tau = 1.0;
    std::string structure = "diagonal";
    double rho = 0.5;
    std::string calibration = "interventional";
    std::uint64_t seed = 1;
    std::string out = ".";
};

int cmd_simulate(const SimulateArgs& a) {
    const Index n_edges = a.edges.value_or(3 * a.p);
    const TrueNetwork net = random_dag(a.p, n_edges, a.max_parents, derive_seed(a.seed, {0}));
    const SimulatedData sim = gen_data(net, a.n_per_node, derive_seed(a.seed, {1}));
    ContaminationSpec spec;
    spec.structure = parse_structure(a.structure);
    spec.tau = a.tau;
    spec.rho = a.rho;
    const Contaminated con = contaminate_calibrated(sim, spec, a.calibration, derive_seed(a.seed, {2}));

    ensure_dir(a.out);
    const fs::path dir(a.out);
    std::vector<std::string> header;
    for (Index j = 0; j < a.p; ++j) header.push_back("X" + std::to_string(j + 1));
    write_matrix_csv((dir / "data.csv").string(), con.w, header);
    write_interventions((dir / "interventions.txt").string(), sim.intervened);
    write_matrix_csv((dir / "b_true.csv").string(), net.b_star.matrix());
    write_matrix_csv((dir / "sigma_u.csv").string(), con.error.sigma());

    json realized = json::array();
    for (Index j = 0; j < a.p; ++j) realized.push_back(con.realized_tau(j));
    json manifest{{"seed", a.seed},
                  {"p", a.p},
                  {"edges", n_edges},
                  {"max_parents", a.max_parents},
                  {"n_per_node", a.n_per_node},
                  {"rows", sim.x.rows()},
                  {"tau", a.tau},
                  {"structure", to_string(spec.structure)},
                  {"rho", a.rho},
                  {"calibration", a.calibration},
                  {"sigma2_u", con.sigma2_u},
                  {"realized_tau", realized},
                  {"files",
                   {{"data", "data.csv"},
                    {"interventions", "interventions.txt"},
                    {"b_true", "b_true.csv"},
                    {"sigma_u", "sigma_u.csv"}}}};
    write_json(dir / "manifest.json", manifest);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
    std::string data;
    std::optional<std::string> interventions;
    std::optional<std::string> sigma_u;
    std::string method = "nps";
    std::string lambda = "auto";
    std::string out = ".";
    EstimatorFlags ef;
};

int cmd_estimate(const EstimateArgs& a, int jobs) {
    const Method m = parse_method(a.method);
    const std::optional<double> lambda = parse_lambda(a.lambda);
    const DataSet ds = load_dataset(a.data, a.interventions);
    ErrorSpec es = ErrorSpec::zero(ds.nodes());
    if (uses_error_spec(m)) {
        if (!a.sigma_u) throw usage_error("--sigma-u is required for --method " + a.method);
        es = ErrorSpec(read_matrix_csv(*a.sigma_u));
    } else if (a.sigma_u) {
        std::cerr << "note: --sigma-u is ignored by pcd-naive\n";
    }
    const Estimate est = run_estimate(m, ds, es, lambda, a.ef, jobs);

    ensure_dir(a.out);
    const fs::path dir(a.out);
    json j = to_json(est.fit, a.ef.zero_threshold);
    if (est.tuning) j["tuning"] = to_json(*est.tuning);
    write_json(dir / "fit.json", j);
    write_matrix_csv((dir / "b_hat.csv").string(), est.fit.b_hat.matrix());
    {
        auto os = detail::open_output((dir / "edges.txt").string());
        write_edge_list(os, graph_from_coefs(est.fit.b_hat, a.ef.zero_threshold));
    }
    if (est.tuning) {
        auto os = detail::open_output((dir / "sweep.csv").string());
        write_sweep_csv(os, *est.tuning);
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string b_true;
    std::string b_hat;
    double threshold = default_zero_threshold;
    std::string correctness = "bounded";
};

int cmd_evaluate(const EvaluateArgs& a) {
    const CoefMatrix t(read_matrix_csv(a.b_true));
    const CoefMatrix h(read_matrix_csv(a.b_hat));
    if (t.size() != h.size()) throw data_error("true and estimated matrices have different sizes");
    const auto mode = a.correctness == "literal" ? CorrectnessMode::literal : CorrectnessMode::bounded;
    std::cout << to_json(evaluate(t, h, a.threshold, mode)).dump() << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// replicate

struct ReplicateArgs {
    std::vector<Index> p{10};
    Index graphs = 10;
    std::vector<double> tau{0.8, 0.85, 0.9, 0.95, 1.0};
    std::vector<std::string> structures{"diagonal", "ar"};
    std::vector<std::string> methods{"all"};
    std::optional<Index> edges_per_node;
    Index max_parents = 4;
    Index n_per_node = 5;
    std::string lambda = "auto";
    std::string calibration = "interventional";
    std::uint64_t seed = 1;
    std::string out = ".";
    EstimatorFlags ef;
};

struct Cell {
    Index p;
    Index graph;
    double tau;
    ErrorStructure structure;
    Method method;
};

struct CellResult {
    double lambda = 0.0;
    GraphEval ev;
    bool converged = false;
    std::string error;
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_replicate(const ReplicateArgs& a, int jobs) {
    const std::optional<double> lambda = parse_lambda(a.lambda);
    const std::vector<Method> methods = parse_methods(a.methods);
    std::vector<ErrorStructure> structures;
    for (const auto& s : a.structures) structures.push_back(parse_structure(s));
    std::sort(structures.begin(), structures.end());
    structures.erase(std::unique(structures.begin(), structures.end()), structures.end());
    std::vector<double> taus = a.tau;
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    for (double t : taus) {
        if (!(t > 0.0 && t <= 1.0)) throw argument_error("tau values must lie in (0, 1]");
    }
    std::vector<Index> ps = a.p;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    if (a.graphs < 1) throw argument_error("--graphs must be >= 1");

    // Graphs and error-free data are shared by every (tau, structure) cell.
    struct GraphData {
        TrueNetwork net;
        SimulatedData sim;
    };
    std::map<std::pair<Index, Index>, GraphData> base;
    for (Index p : ps) {
        const Index n_edges = a.edges_per_node.value_or(3) * p;
        for (Index g = 0; g < a.graphs; ++g) {
            const auto up = static_cast<std::uint64_t>(p), ug = static_cast<std::uint64_t>(g);
            TrueNetwork net = random_dag(p, n_edges, a.max_parents, derive_seed(a.seed, {up, ug, 0}));
            SimulatedData sim = gen_data(net, a.n_per_node, derive_seed(a.seed, {up, ug, 1}));
            base.emplace(std::make_pair(p, g), GraphData{std::move(net), std::move(sim)});
        }
    }

    std::vector<Cell> cells;
    for (Index p : ps) {
        for (Index g = 0; g < a.graphs; ++g) {
            for (double t : taus) {
                for (ErrorStructure s : structures) {
                    for (Method m : methods) cells.push_back({p, g, t, s, m});
                }
            }
        }
    }
    std::vector<CellResult> results(cells.size());
    parallel_for(cells.size(), jobs, [&](std::size_t k) {
        const Cell& c = cells[k];
        const GraphData& gd = base.at({c.p, c.graph});
        ContaminationSpec spec;
        spec.structure = c.structure;
        spec.tau = c.tau;
        const auto noise_seed = derive_seed(a.seed, {static_cast<std::uint64_t>(c.p), static_cast<std::uint64_t>(c.graph),
                                                     2, std::bit_cast<std::uint64_t>(c.tau),
                                                     static_cast<std::uint64_t>(c.structure)});
        CellResult& r = results[k];
        try {
            const Contaminated con = contaminate_calibrated(gd.sim, spec, a.calibration, noise_seed);
            const DataSet ds(con.w, gd.sim.intervened);
            const Estimate est = run_estimate(c.method, ds, con.error, lambda, a.ef, 1);
            r.lambda = est.fit.lambda;
            r.converged = est.fit.diagnostics.converged;
            r.ev = evaluate(gd.net.b_star, est.fit.b_hat, a.ef.zero_threshold);
        } catch (const numerical_error& e) {
            r.error = e.what();
        } catch (const data_error& e) {
            r.error = e.what();
        }
    });

    ensure_dir(a.out);
    const fs::path dir(a.out);
    {
        auto os = detail::open_output((dir / "results.csv").string());
        os << "p,graph,tau,structure,method,lambda,edges,tpr,fdr,specificity,correctness,frob_scaled,converged,status\n";
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const Cell& c = cells[k];
            const CellResult& r = results[k];
            os << c.p << ',' << c.graph + 1 << ',' << format_double(c.tau) << ',' << to_string(c.structure) << ','
               << to_string(c.method) << ',';
            if (r.error.empty()) {
                os << format_double(r.lambda) << ',' << r.ev.estimated_edges << ',' << format_double(r.ev.tpr) << ','
                   << format_double(r.ev.fdr) << ',' << format_double(r.ev.specificity) << ','
                   << format_double(r.ev.correctness) << ',' << format_double(r.ev.frob_scaled) << ','
                   << (r.converged ? 1 : 0) << ",ok\n";
            } else {
                os << ",,,,,,,," << csv_quote("error: " + r.error) << '\n';
            }
        }
    }
    {
        auto os = detail::open_output((dir / "summary.csv").string());
        os << "p,tau,structure,method,runs,failed,mean_tpr,mean_fdr,mean_specificity,mean_correctness,"
              "mean_frob_scaled,median_frob_scaled\n";
        // cells are ordered (p, graph, tau, structure, method); group over graphs
        const std::size_t per_graph = taus.size() * structures.size() * methods.size();
        for (std::size_t pi = 0; pi < ps.size(); ++pi) {
            for (std::size_t off = 0; off < per_graph; ++off) {
                std::vector<double> tpr, fdr, spec, corr, frob;
                std::size_t failed = 0;
                const Cell* first = nullptr;
                for (Index g = 0; g < a.graphs; ++g) {
                    const std::size_t k = (pi * static_cast<std::size_t>(a.graphs) + static_cast<std::size_t>(g)) * per_graph + off;
                    if (!first) first = &cells[k];
                    const CellResult& r = results[k];
                    if (!r.error.empty()) {
                        ++failed;
                        continue;
                    }
                    tpr.push_back(r.ev.tpr);
                    fdr.push_back(r.ev.fdr);
                    spec.push_back(r.ev.specificity);
                    corr.push_back(r.ev.correctness);
                    frob.push_back(r.ev.frob_scaled);
                }
                auto mean = [](const std::vector<double>& v) {
                    double s = 0.0;
                    for (double x : v) s += x;
                    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
                };
                os << first->p << ',' << format_double(first->tau) << ',' << to_string(first->structure) << ','
                   << to_string(first->method) << ',' << tpr.size() << ',' << failed << ',';
                if (tpr.empty()) {
                    os << ",,,,,\n";
                } else {
                    os << format_double(mean(tpr)) << ',' << format_double(mean(fdr)) << ','
                       << format_double(mean(spec)) << ',' << format_double(mean(corr)) << ','
                       << format_double(mean(frob)) << ',' << format_double(median(frob)) << '\n';
                }
            }
        }
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian network structure learning from error-prone measurements"};
    app.require_subcommand(1);
    app.set_config("--config", "", "JSON config file; command-line flags override its values");
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    int jobs = 1;
    auto add_jobs = [&jobs](CLI::App* sub) {
        sub->add_option("--jobs", jobs, "worker threads (default from CSBN_JOBS, else 1)")
            ->envname("CSBN_JOBS")
            ->check(CLI::PositiveNumber);
    };

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "draw a random DAG, data and measurement error");
    sim->add_option("--p", sa.p, "number of nodes")->capture_default_str();
    sim->add_option("--edges", sa.edges, "number of edges (default 3p)");
    sim->add_option("--max-parents", sa.max_parents, "parent cap per node")->capture_default_str();
    sim->add_option("--n-per-node", sa.n_per_node, "interventional rows per node")->capture_default_str();
    sim->add_option("--tau", sa.tau, "reliability ratio in (0, 1]")->capture_default_str();
    sim->add_option("--structure", sa.structure, "error covariance: diagonal or ar")
        ->check(CLI::IsMember({"diagonal", "ar"}))
        ->capture_default_str();
    sim->add_option("--rho", sa.rho, "AR base")->capture_default_str();
    sim->add_option("--calibration", sa.calibration, "variance used to set sigma2_u: interventional or all-rows")
        ->check(CLI::IsMember({"interventional", "all-rows"}))
        ->capture_default_str();
    sim->add_option("--seed", sa.seed, "random seed")->capture_default_str();
    sim->add_option("--out", sa.out, "output directory")->capture_default_str();

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate", "fit a DAG to data");
    est->add_option("--data", ea.data, "data CSV (N x p)")->required();
    est->add_option("--interventions", ea.interventions, "intervention file (obs or 1-based node per row)");
    est->add_option("--sigma-u", ea.sigma_u, "measurement error covariance CSV (p x p)");
    est->add_option("--method", ea.method, "pcd-corrected, pcd-naive or nps")
        ->check(CLI::IsMember({"pcd-corrected", "pcd-naive", "nps"}))
        ->capture_default_str();
    est->add_option("--lambda", ea.lambda, "penalty level, or auto")->capture_default_str();
    est->add_option("--out", ea.out, "output directory")->capture_default_str();
    ea.ef.add(est);
    add_jobs(est);

    EvaluateArgs va;
    auto* ev = app.add_subcommand("evaluate", "compare an estimated coefficient matrix with the truth");
    ev->add_option("--true", va.b_true, "true B CSV")->required();
    ev->add_option("--estimated", va.b_hat, "estimated B CSV")->required();
    ev->add_option("--threshold", va.threshold, "|beta| below this is no edge")->capture_default_str();
    ev->add_option("--correctness", va.correctness, "bounded or literal")
        ->check(CLI::IsMember({"bounded", "literal"}))
        ->capture_default_str();

    ReplicateArgs ra;
    auto* rep = app.add_subcommand("replicate", "run the simulation sweep and write metric tables");
    rep->add_option("--p", ra.p, "node counts")->delimiter(',')->capture_default_str();
    rep->add_option("--graphs", ra.graphs, "graphs per p")->capture_default_str();
    rep->add_option("--tau", ra.tau, "reliability ratios")->delimiter(',')->capture_default_str();
    rep->add_option("--structures", ra.structures, "diagonal, ar")->delimiter(',')->capture_default_str();
    rep->add_option("--methods", ra.methods, "pcd-corrected, pcd-naive, nps or all")
        ->delimiter(',')
        ->capture_default_str();
    rep->add_option("--edges-per-node", ra.edges_per_node, "edges = this * p (default 3)");
    rep->add_option("--max-parents", ra.max_parents, "parent cap per node")->capture_default_str();
    rep->add_option("--n-per-node", ra.n_per_node, "interventional rows per node")->capture_default_str();
    rep->add_option("--lambda", ra.lambda, "penalty level, or auto")->capture_default_str();
    rep->add_option("--calibration", ra.calibration, "variance used to set sigma2_u: interventional or all-rows")
        ->check(CLI::IsMember({"interventional", "all-rows"}))
        ->capture_default_str();
    rep->add_option("--seed", ra.seed, "random seed")->capture_default_str();
    rep->add_option("--out", ra.out, "output directory")->capture_default_str();
    ra.ef.add(rep);
    add_jobs(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*sim) return cmd_simulate(sa);
        if (*est) return cmd_estimate(ea, jobs);
        if (*ev) return cmd_evaluate(va);
        if (*rep) return cmd_replicate(ra, jobs);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    } catch (const argument_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_internal;
}
