/*
   Copyright 2026 The Fedretail Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <fedretail/cli.hpp>
#include <fedretail/config.hpp>
#include <fedretail/kernels.hpp>
#include <fedretail/ledger.hpp>
#include <fedretail/orchestrator.hpp>

namespace fedretail::cli {

namespace fs = std::filesystem;
namespace orch = fedretail::orchestrator;

const char* version() { return FEDRETAIL_VERSION; }

namespace {

    constexpr const char* kManifestFile = "manifest.json";
    constexpr const char* kReportJson = "report.json";
    constexpr const char* kReportCsv = "report.csv";
    constexpr const char* kRoundsLog = "rounds.log";
    constexpr const char* kChainFile = "chain.jsonl";
    constexpr const char* kCasDir = "cas";
    constexpr double kHighlightReduction = 0.40;

    int exit_code_for(ErrorCode code) {
        switch (code) {
            case ErrorCode::kMalformedRow:
            case ErrorCode::kSchemaMismatch:
            case ErrorCode::kEmptyInput:
            case ErrorCode::kDegenerateColumn:
            case ErrorCode::kInsufficientHistory:
            case ErrorCode::kEmptySplit:
                return kExitSchema;
            case ErrorCode::kIo:
                return kExitIo;
            case ErrorCode::kAlertInconsistency:
            case ErrorCode::kRoundNotAnchored:
                return kExitIntegrity;
            case ErrorCode::kUnrecoverableDropout:
                return kExitUnrecoverableDropout;
            default:
                return kExitFailure;
        }
    }

    std::optional<std::string> read_file(const fs::path& path) {
        std::ifstream in{path, std::ios::binary};
        if (!in) return std::nullopt;
        std::string text{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
        if (in.bad()) return std::nullopt;
        return text;
    }

    void write_file(const fs::path& path, std::string_view text) {
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw Error{ErrorCode::kIo, "cannot write " + path.string()};
    }

    std::span<const std::uint8_t> as_bytes(std::string_view s) {
        return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
    }

    std::string fixed(double v, int precision) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(precision) << v;
        return os.str();
    }

    std::string scientific(double v) {
        std::ostringstream os;
        os << std::scientific << std::setprecision(6) << v;
        return os.str();
    }

    struct LoadedExperiment {
        orch::ExperimentConfig config;
        std::string dataset_source;
        std::string dataset_cid;
        std::vector<data::StoreRecord> records;
    };

    LoadedExperiment load_experiment(const RunOptions& options) {
        auto kv = KeyValueConfig::load(options.config_path);
        if (options.seed) kv.set("seed", std::to_string(*options.seed));
        LoadedExperiment e;
        e.config = orch::ExperimentConfig::from(kv);
        if (e.config.data_path.empty()) {
            e.records = data::generate_synthetic(e.config.synthetic);
            e.dataset_source = "synthetic";
            e.dataset_cid = ledger::cid_of(as_bytes(data::write_dataset(e.records, e.config.pipeline.date_format))).hex();
        } else {
            const auto text = read_file(e.config.data_path);
            if (!text) throw Error{ErrorCode::kIo, "cannot read " + e.config.data_path};
            e.dataset_source = e.config.data_path;
            e.dataset_cid = ledger::cid_of(as_bytes(*text)).hex();
            e.records = data::parse_dataset(*text, e.config.pipeline.date_format);
        }
        return e;
    }

    std::vector<std::string> result_files(bool with_ledger) {
        std::vector<std::string> files{kReportJson, kReportCsv, kRoundsLog};
        if (with_ledger) {
            files.emplace_back(kChainFile);
            files.emplace_back(kCasDir);
        }
        return files;
    }

    // Clears results of an earlier run and writes the manifest, which is the
    // only file present if the run then fails.
    void begin_outputs(const fs::path& out_dir, const std::string& command, const LoadedExperiment& e, bool with_ledger) {
        fs::create_directories(out_dir);
        for (const auto& name : result_files(true)) fs::remove_all(out_dir / name);
        nlohmann::ordered_json m;
        m["tool"] = "fedretail";
        m["version"] = version();
        m["command"] = command;
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        const auto snapshot = e.config.snapshot();
        for (const auto& [k, v] : snapshot.entries()) cfg[k] = v;
        m["config"] = cfg;
        m["dataset"] = {{"source", e.dataset_source}, {"cid", e.dataset_cid}};
        m["outputs"] = result_files(with_ledger);
        write_file(out_dir / kManifestFile, m.dump(2) + "\n");
    }

    void write_results(const fs::path& out_dir, const orch::ExperimentReport& report, const orch::ExperimentConfig& config,
                       std::span<const orch::RoundReport> rounds, const orch::FederatedRun* ledger_run) {
        // Render everything before touching the directory.
        const auto json = orch::report_json(report, config);
        const auto csv = orch::report_csv(report);
        const auto log = orch::rounds_log(rounds);
        write_file(out_dir / kReportJson, json);
        write_file(out_dir / kReportCsv, csv);
        write_file(out_dir / kRoundsLog, log);
        if (ledger_run != nullptr) {
            write_file(out_dir / kChainFile, ledger::serialize_chain(ledger_run->chain));
            ledger_run->cas.save(out_dir / kCasDir);
        }
    }

    void print_summary(std::ostream& out, const orch::ExperimentReport& report) {
        out << std::left << std::setw(12) << "mode" << std::setw(14) << "mean_mse" << "mean_oe\n";
        for (const auto& m : report.modes) {
            out << std::left << std::setw(12) << orch::to_string(m.mode) << std::setw(14) << fixed(m.mean_mse, 6)
                << fixed(m.mean_oe, 6) << '\n';
        }
    }

    template <typename Body>
    int guarded(std::ostream& err, Body&& body) {
        try {
            return body();
        } catch (const Error& e) {
            err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
            return exit_code_for(e.code());
        } catch (const fs::filesystem_error& e) {
            err << "error [Io]: " << e.what() << '\n';
            return kExitIo;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitFailure;
        }
    }

}  // namespace

int cmd_ingest(const std::string& path, const std::string& date_format, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto text = read_file(path);
        if (!text) throw Error{ErrorCode::kIo, "cannot read " + path};
        const auto records = data::parse_dataset(*text, date_format);
        if (records.empty()) throw Error{ErrorCode::kEmptyInput, "no data rows"};

        std::map<int, std::size_t> rows;
        for (const auto& r : records) ++rows[r.store_id];
        const auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                                  [](const auto& a, const auto& b) { return a.date < b.date; });
        std::size_t min_rows = SIZE_MAX;
        std::size_t max_rows = 0;
        for (const auto& [id, n] : rows) {
            min_rows = std::min(min_rows, n);
            max_rows = std::max(max_rows, n);
        }
        if (min_rows == max_rows) {
            out << rows.size() << " stores, " << min_rows << " weeks each\n";
        } else {
            out << rows.size() << " stores, " << min_rows << " to " << max_rows << " weeks\n";
        }
        out << "date range " << data::format_date(lo->date, date_format) << " .. "
            << data::format_date(hi->date, date_format) << '\n';
        out << "rows " << records.size() << " (cid " << ledger::cid_of(as_bytes(*text)).hex() << ")\n";
        for (const auto& [id, n] : rows) out << "  store " << id << ": " << n << " rows\n";
        return static_cast<int>(kExitOk);
    });
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto e = load_experiment(options);
        const bool with_ledger = e.config.mode == orch::Mode::kFederated && e.config.ledger_enabled;
        const fs::path out_dir{options.out_dir};
        begin_outputs(out_dir, "run", e, with_ledger);

        const auto parts = orch::make_partitions(e.records, e.config);
        orch::FederatedRun run;
        auto result = orch::run_mode(e.config, parts, &run);
        const auto rounds = result.rounds;
        const auto report = orch::single_mode_report(e.config, std::move(result), with_ledger ? &run.chain : nullptr);
        write_results(out_dir, report, e.config, rounds, with_ledger ? &run : nullptr);

        print_summary(out, report);
        out << "results in " << out_dir.string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_compare(const RunOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto e = load_experiment(options);
        const bool with_ledger = e.config.ledger_enabled;
        const fs::path out_dir{options.out_dir};
        begin_outputs(out_dir, "compare", e, with_ledger);

        const auto parts = orch::make_partitions(e.records, e.config);
        orch::FederatedRun run;
        const auto report = orch::compare_modes(e.config, parts, &run);
        write_results(out_dir, report, e.config, report.modes.back().rounds, with_ledger ? &run : nullptr);

        print_summary(out, report);
        out << "waste reduction, federated vs standalone: "
            << (report.waste_reduction ? fixed(*report.waste_reduction, 4) : std::string{"n/a"}) << '\n';
        out << "store  split  reduction\n";
        for (const auto& s : report.store_waste) {
            out << std::left << std::setw(7) << s.store_id << std::setw(7) << fixed(s.split_ratio, 2)
                << (s.reduction ? fixed(*s.reduction, 4) : std::string{"n/a"});
            if (s.reduction && *s.reduction > kHighlightReduction) out << "  > 40%";
            out << '\n';
        }
        out << "results in " << out_dir.string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_gas(const GasOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (options.scenario != "baseline" && options.scenario != "complex") {
            throw Error{ErrorCode::kBadConfig, "scenario must be baseline or complex"};
        }
        std::vector<ledger::GasTariff> tariffs = ledger::bundled_tariffs();
        if (options.tariff_path) {
            const auto text = read_file(*options.tariff_path);
            if (!text) throw Error{ErrorCode::kIo, "cannot read " + *options.tariff_path};
            tariffs = ledger::parse_tariffs(*text);
        }
        double n_tx = 0.0;
        if (options.n_tx) {
            n_tx = *options.n_tx;
        } else if (options.chain_path) {
            const auto text = read_file(*options.chain_path);
            if (!text) throw Error{ErrorCode::kIo, "cannot read " + *options.chain_path};
            const auto parsed = ledger::parse_chain(*text);
            if (parsed.malformed_at) {
                err << "CorruptAt(" << *parsed.malformed_at << ")\n";
                return static_cast<int>(kExitIntegrity);
            }
            n_tx = static_cast<double>(parsed.chain.transaction_count());
        } else {
            throw Error{ErrorCode::kBadConfig, "gas needs a chain file or --n-tx"};
        }
        const double factor = options.complex_factor.value_or(ledger::kDefaultComplexFactor);
        const auto report = ledger::gas_report(n_tx, tariffs, factor);
        const bool complex = options.scenario == "complex";
        out << "scenario " << options.scenario << ", n_tx " << n_tx;
        if (complex) out << ", factor " << factor;
        out << '\n';
        out << std::left << std::setw(16) << "platform" << std::setw(18) << "gwei" << "eth\n";
        for (const auto& row : report.rows) {
            const auto& c = complex ? row.complex : row.baseline;
            out << std::left << std::setw(16) << row.platform << std::setw(18) << fixed(c.total_gwei, 3)
                << scientific(c.total_eth) << '\n';
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_verify(const std::string& chain_path, const std::string& cas_dir, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto text = read_file(chain_path);
        if (!text) throw Error{ErrorCode::kIo, "cannot read " + chain_path};
        if (!fs::is_directory(cas_dir)) throw Error{ErrorCode::kIo, "no content store at " + cas_dir};

        const auto parsed = ledger::parse_chain(*text);
        if (parsed.malformed_at) {
            out << "CorruptAt(" << *parsed.malformed_at << "): record is not canonical\n";
            return static_cast<int>(kExitIntegrity);
        }
        const auto status = ledger::verify_chain(parsed.chain);
        if (!status.ok) {
            out << "CorruptAt(" << status.corrupt_at << "): " << status.reason << '\n';
            return static_cast<int>(kExitIntegrity);
        }
        bool all_valid = true;
        for (const auto& block : parsed.chain.blocks()) {
            const auto round = block.payload.round;
            const auto blob = ledger::read_blob(cas_dir, block.payload.cid);
            if (!blob) {
                out << "round " << round << ": AlertInconsistency (blob missing)\n";
                all_valid = false;
                continue;
            }
            if (ledger::verify_model(*blob, round, parsed.chain) != ledger::ModelVerdict::kValid) {
                out << "round " << round << ": AlertInconsistency\n";
                all_valid = false;
            }
        }
        if (!all_valid) return static_cast<int>(kExitIntegrity);
        out << parsed.chain.size() << " blocks, all anchors Valid\n";
        return static_cast<int>(kExitOk);
    });
}

int cmd_synth(const std::string& path, const data::SyntheticSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto records = data::generate_synthetic(spec);
        write_file(path, data::write_dataset(records));
        out << "wrote " << records.size() << " rows for " << spec.stores << " stores to " << path << '\n';
        return static_cast<int>(kExitOk);
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Federated demand forecasting with secure aggregation and a verifiable model ledger", "fedretail"};
    app.set_version_flag("--version", std::string{version()});
    app.require_subcommand(1);

    std::string ingest_path;
    std::string date_format{data::kDefaultDateFormat};
    auto* ingest = app.add_subcommand("ingest", "Validate a sales CSV and summarize it");
    ingest->add_option("path", ingest_path, "CSV file")->required();
    ingest->add_option("--date-format", date_format, "strftime-style date format");

    RunOptions run_opts;
    auto add_common = [&run_opts](CLI::App* sub) {
        sub->add_option("--config", run_opts.config_path, "experiment config file")->required();
        sub->add_option("--seed", run_opts.seed, "override the config seed");
        sub->add_option("--out", run_opts.out_dir, "output directory");
    };
    auto* run = app.add_subcommand("run", "Run the configured mode and write reports");
    add_common(run);
    auto* compare = app.add_subcommand("compare", "Run standalone, centralized and federated on the same data");
    add_common(compare);

    GasOptions gas_opts;
    std::string chain_arg;
    auto* gas = app.add_subcommand("gas", "Price the chain's transactions on each platform");
    gas->add_option("chain", chain_arg, "chain file");
    gas->add_option("--n-tx", gas_opts.n_tx, "transaction count instead of a chain file");
    gas->add_option("--scenario", gas_opts.scenario, "baseline or complex")->check(CLI::IsMember({"baseline", "complex"}));
    gas->add_option("--factor", gas_opts.complex_factor, "complex deployment multiplier");
    gas->add_option("--tariffs", gas_opts.tariff_path, "tariff CSV replacing the bundled presets");

    std::string verify_chain_path;
    std::string verify_cas;
    auto* verify = app.add_subcommand("verify", "Check chain links and every anchored model blob");
    verify->add_option("chain", verify_chain_path, "chain file")->required();
    verify->add_option("cas", verify_cas, "content store directory")->required();

    std::string synth_path;
    data::SyntheticSpec spec;
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset in the reference schema");
    synth->add_option("path", synth_path, "output CSV")->required();
    synth->add_option("--stores", spec.stores, "store count");
    synth->add_option("--weeks", spec.weeks, "weeks per store");
    synth->add_option("--seed", spec.seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    if (*ingest) return cmd_ingest(ingest_path, date_format, out, err);
    if (*run) return cmd_run(run_opts, out, err);
    if (*compare) return cmd_compare(run_opts, out, err);
    if (*gas) {
        if (!chain_arg.empty()) gas_opts.chain_path = chain_arg;
        return cmd_gas(gas_opts, out, err);
    }
    if (*verify) return cmd_verify(verify_chain_path, verify_cas, out, err);
    if (*synth) return cmd_synth(synth_path, spec, out, err);
    return static_cast<int>(kExitFailure);
}

}  // namespace fedretail::cli
