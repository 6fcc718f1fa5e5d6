#include "castor/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "castor/error.hpp"
#include "castor/model_io.hpp"
#include "castor/pipeline.hpp"
#include "castor/transform.hpp"

namespace castor {
namespace {

struct ConfigFlags {
  CastorConfig config;
  std::string min_mode{"soft"};
  std::string max_mode{"hard"};
  std::string occurrence{"independent"};
  std::string norm_scope{"group"};
  std::string scaler{"sparse"};
  std::vector<double> alphas{kDefaultAlphas};
  std::size_t threads{0};

  PipelineOptions resolve() const {
    PipelineOptions options;
    options.config = config;
    options.config.min_mode = parse_count_mode(min_mode);
    options.config.max_mode = parse_count_mode(max_mode);
    options.config.occurrence = parse_occurrence_mode(occurrence);
    options.config.norm_scope = parse_norm_scope(norm_scope);
    options.config.validate();
    options.classifier.scaler = parse_scaler_kind(scaler);
    options.classifier.alphas = alphas;
    options.threads = threads;
    return options;
  }
};

void add_config_flags(CLI::App* app, ConfigFlags& f) {
  app->add_option("--groups", f.config.groups, "Groups g")->capture_default_str();
  app->add_option("--shapelets", f.config.shapelets, "Shapelets per group k")
      ->capture_default_str();
  app->add_option("--shapelet-length", f.config.shapelet_length, "Odd shapelet length l")
      ->capture_default_str();
  app->add_option("--lower", f.config.rho_lower, "Lower threshold quantile")
      ->capture_default_str();
  app->add_option("--upper", f.config.rho_upper, "Upper threshold quantile")
      ->capture_default_str();
  app->add_option("--norm-prob", f.config.rho_norm, "Probability of a z-normalized group")
      ->capture_default_str();
  app->add_flag("--diff,!--no-diff", f.config.use_diff,
                "Give half the groups to the differenced series");
  app->add_option("--min-mode", f.min_mode, "hard | soft")->capture_default_str();
  app->add_option("--max-mode", f.max_mode, "hard | soft")->capture_default_str();
  app->add_option("--occurrence", f.occurrence, "independent | competing")
      ->capture_default_str();
  app->add_option("--norm-scope", f.norm_scope, "group | shapelet")->capture_default_str();
  app->add_option("--scaler", f.scaler, "sparse | standard | none")->capture_default_str();
  app->add_option("--alphas", f.alphas, "Ridge penalty grid")->delimiter(',');
  app->add_option("--seed", f.config.seed, "Master seed")->capture_default_str();
  app->add_option("--threads", f.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file{path, std::ios::binary};
  if (!file) {
    throw Error{ErrorCode::IoError, "cannot open '" + path + "' for writing"};
  }
  file << text;
  if (!file) {
    throw Error{ErrorCode::IoError, "failed writing '" + path + "'"};
  }
}

// Maps the dataset's label tokens onto the model vocabulary; -1 if unseen.
std::vector<int> labels_in_vocabulary(const LabeledDataset& data,
                                      const std::vector<std::string>& vocabulary) {
  std::map<std::string, int> index;
  for (std::size_t c{0}; c < vocabulary.size(); ++c) {
    index.emplace(vocabulary[c], static_cast<int>(c));
  }
  std::vector<int> mapped;
  mapped.reserve(data.size());
  for (const int label : data.labels()) {
    const auto it{index.find(data.vocabulary()[static_cast<std::size_t>(label)])};
    mapped.push_back(it == index.end() ? -1 : it->second);
  }
  return mapped;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Usage: return kExitUsage;
    case ErrorKind::Data: return kExitData;
    case ErrorKind::Numeric: return kExitNumeric;
  }
  return kExitInternal;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Competing dilated shapelet transform for time series classification", "castor"};
  app.require_subcommand(1);

  // generate
  SyntheticSpec synth;
  std::string generate_out;
  auto* generate{app.add_subcommand("generate", "Write a synthetic UCR-style dataset")};
  generate->add_option("--classes", synth.classes)->capture_default_str();
  generate->add_option("--samples,-n", synth.samples)->capture_default_str();
  generate->add_option("--length,-m", synth.length)->capture_default_str();
  generate->add_option("--seed", synth.seed)->capture_default_str();
  generate->add_option("--amplitude", synth.amplitude)->capture_default_str();
  generate->add_option("--noise", synth.noise)->capture_default_str();
  generate->add_option("-o,--output", generate_out, "Output TSV")->required();

  // fit
  ConfigFlags fit_flags;
  std::string fit_data;
  std::string fit_out;
  std::string fit_json;
  auto* fit{app.add_subcommand("fit", "Fit shapelets and classifier, write a model")};
  fit->add_option("train", fit_data, "Training TSV")->required();
  fit->add_option("-o,--output", fit_out, "Model file")->required();
  fit->add_option("--json", fit_json, "Also write the model as JSON");
  add_config_flags(fit, fit_flags);

  // predict
  std::string predict_model;
  std::string predict_data;
  std::string predict_out;
  std::size_t predict_threads{0};
  auto* predict_cmd{app.add_subcommand("predict", "Predict labels with a saved model")};
  predict_cmd->add_option("model", predict_model)->required();
  predict_cmd->add_option("data", predict_data, "TSV; label column is used for accuracy")
      ->required();
  predict_cmd->add_option("-o,--output", predict_out, "Predictions CSV (default stdout)");
  predict_cmd->add_option("--threads", predict_threads)->capture_default_str();

  // evaluate
  ConfigFlags eval_flags;
  std::string eval_data;
  std::string eval_json;
  std::string eval_csv;
  std::size_t eval_folds{5};
  std::size_t eval_repeats{5};
  auto* evaluate_cmd{app.add_subcommand("evaluate", "Repeated stratified k-fold evaluation")};
  evaluate_cmd->add_option("data", eval_data)->required();
  evaluate_cmd->add_option("--folds", eval_folds, "1 = train and test on all data")
      ->capture_default_str();
  evaluate_cmd->add_option("--repeats", eval_repeats)->capture_default_str();
  evaluate_cmd->add_option("--json", eval_json, "JSON report path");
  evaluate_cmd->add_option("--csv", eval_csv, "Per-fold CSV path");
  add_config_flags(evaluate_cmd, eval_flags);

  // ablate
  ConfigFlags ablate_flags;
  std::string ablate_data;
  std::string ablate_axis;
  std::string ablate_out;
  AblationGrid grid;
  std::size_t ablate_folds{5};
  std::size_t ablate_repeats{5};
  auto* ablate{app.add_subcommand("ablate", "Sweep one hyperparameter axis")};
  ablate->add_option("data", ablate_data)->required();
  ablate->add_option("--axis", ablate_axis, "gk | counting | occurrence | rho | norm | diff")
      ->required();
  ablate->add_option("--product", grid.product, "g*k for the gk axis")->capture_default_str();
  ablate->add_option("--lower-grid", grid.lower_grid)->delimiter(',');
  ablate->add_option("--upper-grid", grid.upper_grid)->delimiter(',');
  ablate->add_option("--norm-grid", grid.norm_grid)->delimiter(',');
  ablate->add_option("--length-grid", grid.length_grid)->delimiter(',');
  ablate->add_option("--group-grid", grid.group_grid)->delimiter(',');
  ablate->add_option("--folds", ablate_folds)->capture_default_str();
  ablate->add_option("--repeats", ablate_repeats)->capture_default_str();
  ablate->add_option("-o,--output", ablate_out, "CSV path (default stdout)");
  add_config_flags(ablate, ablate_flags);

  // bench
  ConfigFlags bench_flags;
  std::string bench_data;
  std::string bench_axis{"n"};
  std::vector<std::size_t> bench_factors{1, 2, 4};
  std::size_t bench_runs{3};
  std::string bench_out;
  auto* bench{app.add_subcommand("bench", "Time fit+transform while scaling n or m")};
  bench->add_option("data", bench_data)->required();
  bench->add_option("--axis", bench_axis, "n (replicate samples) | m (tile series)")
      ->capture_default_str();
  bench->add_option("--factors", bench_factors)->delimiter(',');
  bench->add_option("--runs", bench_runs, "Runs per factor; the median is reported")
      ->capture_default_str();
  bench->add_option("-o,--output", bench_out, "CSV path (default stdout)");
  add_config_flags(bench, bench_flags);

  // transform
  std::string transform_model;
  std::string transform_data;
  std::string transform_out;
  std::size_t transform_threads{0};
  auto* transform_cmd{app.add_subcommand("transform", "Write the feature matrix as CSV")};
  transform_cmd->add_option("model", transform_model)->required();
  transform_cmd->add_option("data", transform_data)->required();
  transform_cmd->add_option("-o,--output", transform_out)->required();
  transform_cmd->add_option("--threads", transform_threads)->capture_default_str();

  // export-json
  std::string export_model;
  std::string export_out;
  auto* export_json{app.add_subcommand("export-json", "Dump a model file as JSON")};
  export_json->add_option("model", export_model)->required();
  export_json->add_option("-o,--output", export_out, "JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*generate) {
      write_ucr_tsv(generate_synthetic(synth), generate_out);
      out << "wrote " << synth.samples << " series of length " << synth.length << " to "
          << generate_out << '\n';
    } else if (*fit) {
      PipelineOptions options{fit_flags.resolve()};
      const LabeledDataset train{load_ucr_tsv(fit_data)};
      options.config.seed = fit_seed(fit_flags.config.seed, 0, 0);
      FitTimings timings;
      const CastorModel model{fit_model(train, options, &timings)};
      save_model(model, fit_out);
      if (!fit_json.empty()) {
        write_text(fit_json, model_to_json(model).dump(2) + "\n");
      }
      out << "features: " << model.params.num_features() << '\n'
          << "alpha: " << model.classifier->alpha << '\n'
          << "params_seconds: " << timings.params_seconds << '\n'
          << "transform_seconds: " << timings.transform_seconds << '\n'
          << "classifier_seconds: " << timings.classifier_seconds << '\n';
    } else if (*predict_cmd) {
      const CastorModel model{load_model(predict_model)};
      const LabeledDataset data{load_ucr_tsv(predict_data)};
      const Prediction prediction{predict(model, data.series(), predict_threads)};
      const std::vector<int> truth{labels_in_vocabulary(data, model.classifier->vocabulary)};

      std::ostringstream csv;
      csv.precision(17);
      csv << "index,predicted,actual";
      for (const auto& token : model.classifier->vocabulary) {
        csv << ",score_" << token;
      }
      csv << '\n';
      std::size_t correct{0};
      for (std::size_t i{0}; i < data.size(); ++i) {
        csv << i << ',' << prediction.tokens[i] << ','
            << data.vocabulary()[static_cast<std::size_t>(data.labels()[i])];
        for (std::size_t c{0}; c < prediction.classes; ++c) {
          csv << ',' << prediction.score(i, c);
        }
        csv << '\n';
        correct += prediction.labels[i] == truth[i] ? 1 : 0;
      }
      if (predict_out.empty()) {
        out << csv.str();
      } else {
        write_text(predict_out, csv.str());
      }
      const double acc{static_cast<double>(correct) / static_cast<double>(data.size())};
      (predict_out.empty() ? err : out) << "accuracy: " << acc << '\n';
    } else if (*evaluate_cmd) {
      const PipelineOptions options{eval_flags.resolve()};
      const LabeledDataset data{load_ucr_tsv(eval_data)};
      const RunReport report{evaluate(data, options, eval_folds, eval_repeats)};
      if (!eval_json.empty()) {
        write_text(eval_json, report.to_json().dump(2) + "\n");
      }
      if (!eval_csv.empty()) {
        write_text(eval_csv, report.to_csv());
      }
      out << "features: " << report.num_features << '\n'
          << "runs: " << report.results.size() << '\n'
          << "mean_accuracy: " << report.mean_accuracy << '\n'
          << "std_accuracy: " << report.std_accuracy << '\n'
          << "seconds: " << report.total_seconds << '\n';
    } else if (*ablate) {
      const PipelineOptions options{ablate_flags.resolve()};
      const auto points{ablation_points(ablate_axis, options.config, grid)};
      const LabeledDataset data{load_ucr_tsv(ablate_data)};
      const auto rows{run_ablation(data, points, options, ablate_folds, ablate_repeats)};
      std::ostringstream csv;
      csv.precision(17);
      csv << "axis,setting,mean_accuracy,std_accuracy,seconds\n";
      for (const auto& row : rows) {
        csv << ablate_axis << ',' << row.label << ',' << row.mean_accuracy << ','
            << row.std_accuracy << ',' << row.seconds << '\n';
      }
      if (ablate_out.empty()) {
        out << csv.str();
      } else {
        write_text(ablate_out, csv.str());
      }
    } else if (*bench) {
      const PipelineOptions options{bench_flags.resolve()};
      ScaleAxis axis{ScaleAxis::Samples};
      if (bench_axis == "m") {
        axis = ScaleAxis::Length;
      } else if (bench_axis != "n") {
        throw Error{ErrorCode::InvalidConfig, "bench axis must be n or m, got " + bench_axis};
      }
      const LabeledDataset data{load_ucr_tsv(bench_data)};
      const BenchResult result{
          run_bench(data, options.config, axis, bench_factors, options.threads, bench_runs)};
      std::ostringstream csv;
      csv.precision(17);
      csv << "factor,n,m,seconds\n";
      for (const auto& row : result.rows) {
        csv << row.factor << ',' << row.samples << ',' << row.length << ',' << row.seconds
            << '\n';
      }
      if (bench_out.empty()) {
        out << csv.str();
      } else {
        write_text(bench_out, csv.str());
      }
      (bench_out.empty() ? err : out) << "slope: " << result.slope << '\n';
    } else if (*transform_cmd) {
      const CastorModel model{load_model(transform_model)};
      const LabeledDataset data{load_ucr_tsv(transform_data)};
      const FeatureMatrix features{transform(data.series(), model.params, transform_threads)};
      std::ofstream file{transform_out};
      if (!file) {
        throw Error{ErrorCode::IoError, "cannot open '" + transform_out + "' for writing"};
      }
      file.precision(17);
      file << "label";
      for (std::size_t c{0}; c < features.cols; ++c) {
        file << ',' << features.layout.name(c);
      }
      file << '\n';
      for (std::size_t i{0}; i < features.rows; ++i) {
        file << data.vocabulary()[static_cast<std::size_t>(data.labels()[i])];
        for (const double v : features.row(i)) {
          file << ',' << v;
        }
        file << '\n';
      }
      if (!file) {
        throw Error{ErrorCode::IoError, "failed writing '" + transform_out + "'"};
      }
    } else if (*export_json) {
      const std::string text{model_to_json(load_model(export_model)).dump(2) + "\n"};
      if (export_out.empty()) {
        out << text;
      } else {
        write_text(export_out, text);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace castor
