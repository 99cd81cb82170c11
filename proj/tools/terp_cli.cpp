// Command-line front end: simulate, cluster, evaluate, bench, plot.

#include "terp/csv_io.hpp"
#include "terp/evaluation.hpp"
#include "terp/experiment.hpp"
#include "terp/svg_plot.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;

struct CommonOptions {
    std::string regime = "regular";
    int k = 2;
    std::vector<int> k_sweep;
    std::vector<std::string> families;
    std::vector<std::size_t> m_set;
    std::uint64_t seed = 1;
    std::string out;
    int restarts = 10;
    int max_sweeps = 100;
    std::size_t threads = 0;
    bool no_plot = false;
    bool record_time = false;
};

void add_clustering_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--k", o.k, "number of clusters")->capture_default_str();
    cmd->add_option("--k-sweep", o.k_sweep, "candidate K values; the one with minimal final cost is reported")
        ->delimiter(',');
    cmd->add_option("--families", o.families,
                    "projection families: bm,bb,haar-poly,haar-exp,fourier-poly,fourier-exp (default all six)")
        ->delimiter(',');
    cmd->add_option("--m-set", o.m_set, "numbers of projections (default 10,50,100,500,1000)")->delimiter(',');
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--restarts", o.restarts, "optimizer restarts")->capture_default_str();
    cmd->add_option("--max-sweeps", o.max_sweeps, "relocation sweeps per restart")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)")->capture_default_str();
    cmd->add_flag("--no-plot", o.no_plot, "skip the SVG cluster plot");
    cmd->add_flag("--record-time", o.record_time, "fill the wall_seconds column (results no longer byte-reproducible)");
}

terp::ExperimentConfig to_experiment(const CommonOptions& o) {
    terp::ExperimentConfig cfg;
    cfg.regime = terp::regime_from_string(o.regime);
    cfg.clusters = o.k;
    cfg.k_sweep = o.k_sweep;
    if (!o.families.empty()) {
        cfg.ensemble.families.clear();
        for (const auto& f : o.families) cfg.ensemble.families.push_back(terp::family_from_name(f));
    }
    if (!o.m_set.empty()) cfg.ensemble.m_set = o.m_set;
    cfg.ensemble.optimizer.restarts = o.restarts;
    cfg.ensemble.optimizer.max_sweeps = o.max_sweeps;
    cfg.master_seed = o.seed;
    cfg.output_dir = o.out;
    cfg.threads = o.threads;
    cfg.plots = !o.no_plot;
    cfg.record_time = o.record_time;
    return cfg;
}

void print_report(const terp::ExperimentReport& report) {
    for (const auto& r : report.replicates) {
        const auto& e = r.ensemble;
        std::cout << "replicate " << r.replicate << ": K=" << r.clusters << " l*=" << e.selected.family_index + 1 << " ("
                  << e.selected_family << ") M*=" << e.selected_m << " s*=" << e.selected.stage
                  << " cost=" << terp::format_double(e.cost);
        if (r.rand) std::cout << " rand=" << terp::format_double(*r.rand);
        std::cout << '\n';
    }
    if (report.mean_rand) {
        std::cout << "mean rand index: " << terp::format_double(*report.mean_rand)
                  << " (sd " << terp::format_double(*report.sd_rand) << ")\n";
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw terp::DataError("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage ensemble random-projection clustering of functional data"};
    app.require_subcommand(1);

    // simulate
    CommonOptions sim;
    int sim_model = 1;
    std::vector<int> sim_sizes = {30, 30};
    auto* simulate = app.add_subcommand("simulate", "write a simulated model dataset and its true labels");
    simulate->set_config("--config");
    simulate->add_option("--model", sim_model, "model id 1..10")->capture_default_str();
    simulate->add_option("--sizes", sim_sizes, "population sizes")->delimiter(',');
    simulate->add_option("--regime", sim.regime, "regular, irregular or fragmented")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "output directory")->required();

    // cluster
    CommonOptions clu;
    std::string clu_data;
    std::string clu_truth;
    int clu_derivative = 0;
    auto* cluster = app.add_subcommand("cluster", "cluster a CSV dataset");
    cluster->set_config("--config");
    cluster->add_option("data", clu_data, "dataset CSV (wide or long layout)")->required();
    cluster->add_option("--truth", clu_truth, "optional true labels for a Rand index");
    cluster->add_option("--regime", clu.regime, "regular, irregular or fragmented")->capture_default_str();
    cluster->add_option("--derivative", clu_derivative, "differentiate regular curves first (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    cluster->add_option("--out", clu.out, "output directory")->required();
    add_clustering_options(cluster, clu);

    // evaluate
    std::string eval_a;
    std::string eval_b;
    auto* evaluate = app.add_subcommand("evaluate", "Rand index between two label files");
    evaluate->add_option("labels_a", eval_a)->required();
    evaluate->add_option("labels_b", eval_b)->required();

    // bench
    CommonOptions ben;
    int ben_model = 1;
    std::vector<int> ben_sizes = {30, 30};
    int ben_reps = 20;
    auto* bench = app.add_subcommand("bench", "Monte-Carlo Rand-index benchmark on a simulation model");
    bench->set_config("--config");
    bench->add_option("--model", ben_model, "model id 1..10")->capture_default_str();
    bench->add_option("--sizes", ben_sizes, "population sizes")->delimiter(',');
    bench->add_option("--regime", ben.regime, "regular, irregular or fragmented")->capture_default_str();
    bench->add_option("--reps", ben_reps, "Monte-Carlo replicates")->capture_default_str();
    bench->add_option("--out", ben.out, "output directory")->required();
    add_clustering_options(bench, ben);

    // plot
    std::string plot_data;
    std::string plot_labels;
    std::string plot_out;
    std::string plot_regime = "auto";
    auto* plot = app.add_subcommand("plot", "SVG of curves coloured by cluster");
    plot->add_option("data", plot_data, "dataset CSV")->required();
    plot->add_option("--labels", plot_labels, "label file")->required();
    plot->add_option("--regime", plot_regime, "auto or fragmented (breaks curves at gaps)")->capture_default_str();
    plot->add_option("--out", plot_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*simulate) {
            const auto regime = terp::regime_from_string(sim.regime);
            const auto data = terp::simulate_dataset(sim_model, sim_sizes, regime, terp::SeedSpec(sim.seed, {1, 0}));
            std::filesystem::create_directories(sim.out);
            std::ostringstream csv;
            terp::write_dataset_csv(csv, data.dataset);
            write_text(std::filesystem::path(sim.out) / "data.csv", csv.str());
            std::ostringstream labels;
            terp::write_labels_csv(labels, data.dataset.ids(), data.truth);
            write_text(std::filesystem::path(sim.out) / "truth.csv", labels.str());
            std::cout << "wrote " << data.dataset.size() << " " << sim.regime << " curves to " << sim.out << '\n';
        } else if (*cluster) {
            auto cfg = to_experiment(clu);
            cfg.data_path = clu_data;
            if (!clu_truth.empty()) cfg.truth_path = clu_truth;
            cfg.derivative_order = clu_derivative;
            print_report(terp::run_experiment(cfg));
        } else if (*evaluate) {
            const auto a = terp::read_labels_csv(eval_a);
            const auto b = terp::read_labels_csv(eval_b);
            const double ri = terp::rand_index(terp::partition_from_labels(std::span<const std::string>(a)),
                                               terp::partition_from_labels(std::span<const std::string>(b)));
            std::cout << terp::format_double(ri) << '\n';
        } else if (*bench) {
            auto cfg = to_experiment(ben);
            cfg.model = ben_model;
            cfg.sizes = ben_sizes;
            cfg.replicates = ben_reps;
            print_report(terp::run_experiment(cfg));
        } else if (*plot) {
            if (plot_regime != "auto" && plot_regime != "fragmented") {
                throw terp::ConfigError("plot --regime must be auto or fragmented");
            }
            const auto loaded = terp::read_dataset_csv(plot_data, plot_regime == "fragmented");
            const auto labels = terp::read_labels_csv(plot_labels);
            if (labels.size() != loaded.dataset.size()) throw terp::DataError("label count does not match curve count");
            const auto partition = terp::partition_from_labels(std::span<const std::string>(labels));
            write_text(plot_out, terp::render_clusters_svg(loaded.dataset, partition));
        }
    } catch (const terp::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const terp::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const terp::DegenerateError& e) {
        std::cerr << "numerical degeneracy: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
