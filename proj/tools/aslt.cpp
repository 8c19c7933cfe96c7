/*
   Copyright 2026 The aslt Authors

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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aslt/error.hpp"
#include "aslt/experiment.hpp"
#include "aslt/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Almost sure limit theorem laboratory for Wiener chaos sequences"};
    app.set_version_flag("--version", aslt::kToolVersion);

    std::string experiment;
    std::string config_path;
    unsigned threads = 1;
    std::string out_dir = ".";
    std::vector<std::string> overrides;

    app.add_option("experiment", experiment, "aslt_run, il_sum, conditions, kernels_check, build_reference, sample_fgn")
        ->required();
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--threads", threads, "replicate worker cap; outputs do not depend on it")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--out", out_dir, "output directory");
    app.add_option("overrides", overrides, "config overrides, /json/pointer=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        nlohmann::json config;
        try {
            config = nlohmann::json::parse(aslt::read_file(config_path));
        } catch (const nlohmann::json::exception& e) {
            throw aslt::Error(aslt::ErrorKind::schema, "config is not valid JSON: " + std::string(e.what()));
        }
        config = aslt::apply_overrides(std::move(config), overrides);
        if (config.contains("experiment") && config["experiment"] != experiment) {
            throw aslt::Error(aslt::ErrorKind::schema, "config names experiment " + config["experiment"].dump() +
                                                           " but the command line selects '" + experiment + "'");
        }
        config["experiment"] = experiment;
        const auto manifest = aslt::run_experiment(config, {out_dir, threads});
        for (const auto& f : manifest["outputs"]) std::cout << f["file"].get<std::string>() << '\n';
        std::cout << "manifest.json\n";
    } catch (const aslt::Error& e) {
        std::cerr << "aslt: " << e.what() << '\n';
        return aslt::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "aslt: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
