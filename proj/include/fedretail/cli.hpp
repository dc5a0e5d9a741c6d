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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <fedretail/data.hpp>

namespace fedretail::cli {

// Process exit codes. These are a stable contract.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitSchema = 2,
    kExitIo = 3,
    kExitIntegrity = 4,
    kExitUnrecoverableDropout = 5,
};

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir{"out"};
};

struct GasOptions {
    std::optional<std::string> chain_path;
    std::optional<double> n_tx;
    std::string scenario{"baseline"};
    std::optional<double> complex_factor;
    std::optional<std::string> tariff_path;
};

int cmd_ingest(const std::string& path, const std::string& date_format, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_gas(const GasOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& chain_path, const std::string& cas_dir, std::ostream& out, std::ostream& err);
int cmd_synth(const std::string& path, const data::SyntheticSpec& spec, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a command.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace fedretail::cli
