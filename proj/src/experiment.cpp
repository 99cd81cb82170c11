#include "terp/experiment.hpp"

#include "terp/csv_io.hpp"
#include "terp/evaluation.hpp"
#include "terp/parallel.hpp"
#include "terp/svg_plot.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace terp {

void ExperimentConfig::validate() const {
    if (model.has_value() == data_path.has_value()) {
        throw ConfigError("exactly one data source is required: a model or a CSV file");
    }
    if (model) {
        ModelSpec spec;
        spec.model = *model;
        spec.sizes = sizes;
        spec.validate();
    }
    if (truth_path && !data_path) throw ConfigError("a truth file only applies to CSV input");
    if (replicates < 1) throw ConfigError("replicate count must be at least 1");
    if (derivative_order < 0 || derivative_order > 2) throw ConfigError("derivative order must be 1 or 2");
    if (derivative_order != 0 && model) throw ConfigError("derivative preprocessing applies to CSV input only");
    for (int k : k_sweep) {
        if (k < 2) throw ConfigError("every K in the sweep must be at least 2");
    }
    if (k_sweep.empty() && clusters < 2) throw ConfigError("K must be at least 2");
    ensemble.validate();
}

LabeledDataset simulate_dataset(int model, const std::vector<int>& sizes, Regime regime, const SeedSpec& seed) {
    ModelSpec spec;
    spec.model = model;
    spec.sizes = sizes;
    spec.seed = seed.child(0);
    switch (regime) {
        case Regime::Regular:
            spec.grid = Grid::equispaced(100);
            return generate_model(spec);
        case Regime::Irregular:
            spec.grid = Grid::equispaced(1000);
            return irregularize(generate_model(spec), 1000, 100, seed.child(1));
        case Regime::Fragmented:
            spec.grid = Grid::equispaced(100);
            return fragment(generate_model(spec), 10, seed.child(1));
    }
    throw ConfigError("unknown regime");
}

int best_k(const std::vector<KSweepEntry>& sweep) {
    if (sweep.empty()) throw ConfigError("empty K sweep");
    const KSweepEntry* best = &sweep.front();
    for (const auto& e : sweep) {
        if (e.cost < best->cost || (e.cost == best->cost && e.clusters < best->clusters)) best = &e;
    }
    return best->clusters;
}

std::vector<std::pair<std::string, int>> ExperimentReport::selection_counts() const {
    std::map<std::tuple<std::size_t, std::size_t, int>, int> counts;
    for (const auto& r : replicates) {
        const auto& s = r.ensemble.selected;
        ++counts[{s.family_index + 1, r.ensemble.selected_m, s.stage}];
    }
    std::vector<std::pair<std::string, int>> out;
    for (const auto& [key, n] : counts) {
        const auto [l, m, s] = key;
        out.emplace_back("l*=" + std::to_string(l) + " M*=" + std::to_string(m) + " s*=" + std::to_string(s), n);
    }
    return out;
}

namespace {

struct ReplicateInput {
    FunctionalDataset data;
    std::optional<Partition> truth;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << content;
}

std::string optional_cost(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    // Read every input up front.
    std::optional<ReplicateInput> shared;
    if (cfg.data_path) {
        auto loaded = read_dataset_csv(*cfg.data_path, cfg.regime == Regime::Fragmented);
        FunctionalDataset data = std::move(loaded.dataset);
        if (cfg.derivative_order != 0) data = derivative(data, cfg.derivative_order);
        std::optional<Partition> truth;
        if (cfg.truth_path) {
            const auto labels = read_labels_csv(*cfg.truth_path);
            if (labels.size() != data.size()) {
                throw DataError("truth file has " + std::to_string(labels.size()) + " labels for " +
                                std::to_string(data.size()) + " curves");
            }
            truth = partition_from_labels(std::span<const std::string>(labels));
        }
        shared = ReplicateInput{std::move(data), std::move(truth)};
    }
    if (!cfg.output_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec) throw DataError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
    }

    ExperimentReport report;
    for (const auto& f : cfg.ensemble.families) report.family_names.push_back(family_name(f));
    report.replicates.resize(static_cast<std::size_t>(cfg.replicates));
    std::vector<ReplicateInput> inputs(static_cast<std::size_t>(cfg.replicates));

    const std::size_t outer = cfg.replicates > 1 ? cfg.threads : 1;
    detail::parallel_for(report.replicates.size(), outer, [&](std::size_t r) {
        const auto start = std::chrono::steady_clock::now();
        const SeedSpec base(cfg.master_seed, {r + 1});
        ReplicateInput input = shared ? *shared : [&] {
            auto sim = simulate_dataset(*cfg.model, cfg.sizes, cfg.regime, base.child(0));
            return ReplicateInput{std::move(sim.dataset), std::move(sim.truth)};
        }();

        EnsembleConfig ens = cfg.ensemble;
        ens.seed = base.child(1);
        ens.threads = cfg.replicates > 1 ? 1 : cfg.threads;

        ReplicateSummary& out = report.replicates[r];
        out.replicate = static_cast<int>(r + 1);
        if (cfg.k_sweep.empty()) {
            ens.clusters = cfg.clusters;
            out.ensemble = run_ensemble(input.data, ens);
            out.clusters = cfg.clusters;
        } else {
            std::vector<EnsembleResult> results;
            for (int k : cfg.k_sweep) {
                ens.clusters = k;
                results.push_back(run_ensemble(input.data, ens));
                out.k_sweep.push_back({k, results.back().cost});
            }
            out.clusters = best_k(out.k_sweep);
            for (std::size_t i = 0; i < cfg.k_sweep.size(); ++i) {
                if (cfg.k_sweep[i] == out.clusters) out.ensemble = std::move(results[i]);
            }
        }
        if (input.truth) out.rand = rand_index(out.ensemble.partition, *input.truth);
        out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        inputs[r] = std::move(input);
    });

    std::vector<double> rands;
    for (const auto& r : report.replicates) {
        if (r.rand) rands.push_back(*r.rand);
    }
    if (!rands.empty()) {
        double mean = 0.0;
        for (double v : rands) mean += v;
        mean /= static_cast<double>(rands.size());
        double ss = 0.0;
        for (double v : rands) ss += (v - mean) * (v - mean);
        report.mean_rand = mean;
        report.sd_rand = rands.size() > 1 ? std::sqrt(ss / static_cast<double>(rands.size() - 1)) : 0.0;
    }

    if (cfg.output_dir.empty()) return report;
    const std::filesystem::path dir(cfg.output_dir);

    std::ostringstream results;
    results << "replicate,l_star,M_star,s_star,final_cost,rand_index,wall_seconds\n";
    std::ostringstream vtable;
    vtable << "replicate,K,family,M,stage1_cost,stage2_cost,v,stage2_skip\n";
    std::ostringstream ksweep;
    ksweep << "replicate,K,final_cost\n";
    for (const auto& r : report.replicates) {
        const auto& e = r.ensemble;
        results << r.replicate << ',' << e.selected.family_index + 1 << ',' << e.selected_m << ',' << e.selected.stage
                << ',' << format_double(e.cost) << ',' << optional_cost(r.rand) << ','
                << (cfg.record_time ? format_double(r.wall_seconds) : std::string("NA")) << '\n';
        for (const auto& rec : e.records) {
            vtable << r.replicate << ',' << r.clusters << ',' << rec.family << ',' << rec.m << ','
                   << optional_cost(rec.stage1_cost) << ',' << optional_cost(rec.stage2_cost) << ','
                   << optional_cost(rec.v()) << ',' << (rec.stage2_skip.empty() ? "" : '"' + rec.stage2_skip + '"')
                   << '\n';
        }
        for (const auto& k : r.k_sweep) ksweep << r.replicate << ',' << k.clusters << ',' << format_double(k.cost) << '\n';

        std::ostringstream labels;
        write_labels_csv(labels, inputs[static_cast<std::size_t>(r.replicate - 1)].data.ids(), e.partition);
        write_file(dir / ("labels_rep" + std::to_string(r.replicate) + ".csv"), labels.str());
    }
    write_file(dir / "results.csv", results.str());
    write_file(dir / "vtable.csv", vtable.str());
    if (!cfg.k_sweep.empty()) write_file(dir / "ksweep.csv", ksweep.str());

    std::ostringstream summary;
    summary << "replicates: " << cfg.replicates << '\n';
    summary << "regime: " << to_string(cfg.regime) << '\n';
    summary << "families:";
    for (std::size_t l = 0; l < report.family_names.size(); ++l) summary << ' ' << l + 1 << '=' << report.family_names[l];
    summary << '\n';
    if (report.mean_rand) {
        summary << "mean_rand_index: " << format_double(*report.mean_rand) << '\n';
        summary << "sd_rand_index: " << format_double(*report.sd_rand) << '\n';
    }
    summary << "selected (l*, M*, s*) frequencies:\n";
    for (const auto& [key, n] : report.selection_counts()) summary << "  " << key << ": " << n << '\n';
    write_file(dir / "summary.txt", summary.str());

    if (cfg.plots) {
        const auto& first = report.replicates.front();
        PlotOptions opts;
        opts.title = "replicate 1, K=" + std::to_string(first.clusters);
        write_file(dir / "clusters_rep1.svg", render_clusters_svg(inputs.front().data, first.ensemble.partition, opts));
    }
    return report;
}

}  // namespace terp
