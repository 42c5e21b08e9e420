// quakeb: b-value feature pipeline over earthquake catalogs.
// Subcommands: ingest, featurize, train, evaluate, synth, stats.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quakeb/quakeb.hpp"

namespace {

using namespace quakeb;

RegionConfig resolve_region(const std::string& selector) {
  if (const RegionConfig* preset = find_region_preset(selector)) return *preset;
  std::ifstream in(selector);
  if (!in)
    throw IoError("'" + selector + "' is neither a built-in region nor a readable config file");
  return parse_region_config(in);
}

Catalog read_catalog_any(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file '" + path + "'");
  if (std::filesystem::path(path).extension() == ".csv") return read_catalog_csv(in, path);
  return parse_catalog(in, path);
}

Dataset read_dataset_file(const std::string& path, DatasetRole role) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file '" + path + "'");
  return read_dataset_csv(in, {}, role);
}

/// All command output is staged in memory and written only after the whole
/// computation succeeded, so failures never leave partial files behind.
void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"earthquake catalog b-value features, network training, and evaluation"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "parse a raw 10-column .dat catalog, filter by cutoff and dates, export CSV");
  std::string ingest_catalog, ingest_region, ingest_output, ingest_start, ingest_end;
  ingest->add_option("--catalog", ingest_catalog, "input .dat file")->required();
  ingest->add_option("--region", ingest_region, "region preset name or config file")->required();
  ingest->add_option("--output", ingest_output, "cleaned catalog CSV path")->required();
  auto* ingest_start_opt =
      ingest->add_option("--start", ingest_start, "keep events from this date/time (inclusive)");
  auto* ingest_end_opt =
      ingest->add_option("--end", ingest_end, "keep events up to this date/time (inclusive)");

  // featurize
  auto* featurize = app.add_subcommand(
      "featurize", "assemble sliding-window feature vectors from a cleaned catalog");
  std::string feat_catalog, feat_region, feat_output, feat_role = "training";
  std::int64_t feat_count = 0;
  std::size_t feat_augment = 0;
  featurize->add_option("--catalog", feat_catalog, "cleaned catalog (.csv) or raw .dat")
      ->required();
  featurize->add_option("--region", feat_region, "region preset name or config file")->required();
  featurize->add_option("--role", feat_role, "training or test")
      ->check(CLI::IsMember({"training", "test"}));
  auto* feat_count_opt = featurize->add_option(
      "--count", feat_count, "exact number of vectors to keep (error if fewer qualify)");
  featurize->add_option("--augment", feat_augment,
                        "duplicate this many largest-target vectors (training only)");
  featurize->add_option("--output", feat_output, "dataset CSV path")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "train the 7-15-1 network on a dataset CSV");
  std::string train_dataset, train_output, train_history;
  TrainParams train_params;
  train_cmd->add_option("--dataset", train_dataset, "training dataset CSV")->required();
  train_cmd->add_option("--output", train_output, "model file path")->required();
  train_cmd->add_option("--history", train_history,
                        "loss history CSV path (default: <output>.history.csv)");
  train_cmd->add_option("--epochs", train_params.epochs, "training epochs");
  train_cmd->add_option("--rate", train_params.learning_rate, "learning rate");
  train_cmd->add_option("--seed", train_params.seed, "weight init / shuffle seed");
  train_cmd->add_flag("--shuffle", train_params.shuffle, "reshuffle patterns each epoch");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "threshold model outputs against a dataset and report confusion metrics");
  std::string eval_model, eval_dataset, eval_region, eval_counts, eval_output, eval_csv;
  double eval_tau = 0;
  evaluate->add_option("--model", eval_model, "model file from train");
  evaluate->add_option("--dataset", eval_dataset, "dataset CSV to evaluate");
  auto* eval_tau_opt = evaluate->add_option("--tau", eval_tau, "decision threshold in (0,1)");
  auto* eval_region_opt = evaluate->add_option(
      "--region", eval_region, "region used for the default threshold (cutoff / 8)");
  evaluate->add_option("--from-counts", eval_counts,
                       "skip prediction and score raw TP,TN,FP,FN counts");
  evaluate->add_option("--output", eval_output, "also write the text report here");
  evaluate->add_option("--csv", eval_csv, "also write the CSV report here");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic catalog as a .dat file");
  std::string synth_output;
  SynthParams synth_params;
  OmoriParams omori;
  bool synth_bin = false;
  synth->add_option("--output", synth_output, ".dat path")->required();
  synth->add_option("--b", synth_params.b_true, "true b-value");
  synth->add_option("--cutoff", synth_params.cutoff, "completeness magnitude");
  synth->add_option("--rate", synth_params.rate_per_day, "background events per day");
  synth->add_option("--days", synth_params.duration_days, "catalog length in days");
  synth->add_option("--seed", synth_params.seed, "generator seed");
  auto* omori_k_opt =
      synth->add_option("--omori-k", omori.productivity, "aftershocks per trigger (enables clustering)");
  synth->add_option("--omori-c", omori.offset_days, "aftershock delay offset, days");
  synth->add_option("--omori-p", omori.decay_exponent, "aftershock decay exponent");
  synth->add_option("--trigger", omori.trigger_magnitude, "minimum triggering magnitude");
  synth->add_flag("--bin", synth_bin, "round magnitudes to 0.1 units above the cutoff");

  // stats
  auto* stats = app.add_subcommand("stats", "per-year event counts and mean magnitudes");
  std::string stats_catalog, stats_output;
  stats->add_option("--catalog", stats_catalog, "catalog file (.dat or .csv)")->required();
  stats->add_option("--output", stats_output, "also write the CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*ingest) {
    const RegionConfig region = resolve_region(ingest_region);
    std::ifstream in(ingest_catalog);
    if (!in) throw IoError("cannot open catalog file '" + ingest_catalog + "'");
    const Catalog raw = parse_catalog(in, ingest_catalog);
    CatalogFilter filter;
    filter.cutoff_magnitude = region.cutoff_magnitude;
    if (*ingest_start_opt) filter.start_date = parse_time_or_date(ingest_start, false, "--start");
    if (*ingest_end_opt) filter.end_date = parse_time_or_date(ingest_end, true, "--end");
    const Catalog kept = filter_catalog(raw, filter);
    std::ostringstream csv;
    write_catalog_csv(kept, csv);
    write_file(ingest_output, csv.str());
    std::cout << "parsed " << raw.events.size() << " events, kept " << kept.events.size()
              << " at Mc " << format_double(region.cutoff_magnitude) << " -> " << ingest_output
              << "\n";
    return 0;
  }

  if (*featurize) {
    const RegionConfig region = resolve_region(feat_region);
    const Catalog catalog = read_catalog_any(feat_catalog);
    const DatasetRole role =
        feat_role == "training" ? DatasetRole::training : DatasetRole::test;
    std::optional<std::size_t> count;
    if (*feat_count_opt) {
      if (feat_count < 0) throw ValidationError("--count must be non-negative");
      count = static_cast<std::size_t>(feat_count);
    }
    Dataset ds = build_dataset(catalog, region, role, count);
    if (feat_augment > 0) ds = augment_dataset(ds, feat_augment);
    std::ostringstream csv;
    write_dataset_csv(ds, csv);
    write_file(feat_output, csv.str());
    std::cout << ds.vectors.size() << " " << to_string(role) << " vectors -> " << feat_output
              << "\n";
    return 0;
  }

  if (*train_cmd) {
    const Dataset ds = read_dataset_file(train_dataset, DatasetRole::training);
    const Normalizer norm = Normalizer::fit(ds);
    const std::vector<Pattern> patterns = to_patterns(ds, norm);
    const Network initial = init_network({}, train_params.seed);
    const TrainResult result = train(initial, patterns, train_params);

    std::ostringstream model_text;
    save_model({result.net, norm}, model_text);
    std::ostringstream history_text;
    history_text << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < result.loss_history.size(); ++i)
      history_text << (i + 1) << ',' << format_double(result.loss_history[i]) << '\n';

    write_file(train_output, model_text.str());
    const std::string history_path =
        train_history.empty() ? train_output + ".history.csv" : train_history;
    write_file(history_path, history_text.str());
    std::cout << "trained on " << patterns.size() << " vectors for " << train_params.epochs
              << " epochs (last mean loss " << format_double(result.loss_history.back())
              << ") -> " << train_output << "\n";
    return 0;
  }

  if (*evaluate) {
    ConfusionMatrix cm;
    if (!eval_counts.empty()) {
      const auto parts = split_char(eval_counts, ',');
      if (parts.size() != 4)
        throw ValidationError("--from-counts expects TP,TN,FP,FN (four comma-separated counts)");
      const char* names[4] = {"TP", "TN", "FP", "FN"};
      std::uint64_t values[4];
      for (int i = 0; i < 4; ++i) {
        const long long v = parse_int(trim(parts[i]), std::string("--from-counts ") + names[i]);
        if (v < 0) throw ValidationError("--from-counts values must be non-negative");
        values[i] = static_cast<std::uint64_t>(v);
      }
      cm = {values[0], values[1], values[2], values[3]};
    } else {
      if (eval_model.empty() || eval_dataset.empty())
        throw ValidationError("evaluate needs --model and --dataset (or --from-counts)");
      std::ifstream model_in(eval_model);
      if (!model_in) throw IoError("cannot open model file '" + eval_model + "'");
      const Model model = load_model(model_in);
      const Dataset ds = read_dataset_file(eval_dataset, DatasetRole::test);
      ThresholdPolicy policy;
      if (*eval_tau_opt)
        policy.tau = eval_tau;
      else if (*eval_region_opt)
        policy = ThresholdPolicy::for_cutoff(resolve_region(eval_region).cutoff_magnitude,
                                             model.norm.magnitude_scale);
      validate(policy);
      const std::vector<double> outputs = predict(model.net, ds, model.norm);
      std::vector<double> targets;
      targets.reserve(ds.vectors.size());
      for (const FeatureVector& v : ds.vectors) targets.push_back(v.y);
      cm = tabulate(outputs, targets, policy);
    }
    const MetricsReport report = metrics(cm);
    std::ostringstream text, csv;
    render_report(report, cm, text);
    render_report_csv(report, cm, csv);
    if (!eval_output.empty()) write_file(eval_output, text.str());
    if (!eval_csv.empty()) write_file(eval_csv, csv.str());
    std::cout << text.str();
    return 0;
  }

  if (*synth) {
    if (*omori_k_opt) synth_params.aftershocks = omori;
    synth_params.bin_magnitudes = synth_bin;
    const Catalog cat = gen_catalog(synth_params);
    std::ostringstream dat;
    write_catalog_dat(cat, dat);
    write_file(synth_output, dat.str());
    std::cout << "generated " << cat.events.size() << " events over "
              << format_double(synth_params.duration_days) << " days -> " << synth_output << "\n";
    return 0;
  }

  if (*stats) {
    const Catalog cat = read_catalog_any(stats_catalog);
    std::ostringstream csv;
    write_yearly_stats_csv(yearly_stats(cat), csv);
    if (!stats_output.empty()) write_file(stats_output, csv.str());
    std::cout << csv.str();
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const quakeb::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const quakeb::Error& e) {  // IoError, ParseError, and kin
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
