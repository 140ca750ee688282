/*
 * Copyright 2025 the qcomb authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "qcomb/benchgen.hpp"

// Deterministic synthetic benchmark: interactome edge list, drug-target and
// disease-gene association tables, and a validated-combination file with
// planted structure for four named diseases. The full scale matches the
// public datasets these formats come from; --scale small is for quick tests.

int main(int argc, char** argv) {
    CLI::App app{"generate the synthetic benchmark datasets"};
    std::string out_dir = "data";
    std::string scale = "full";
    std::uint64_t seed = qcomb::benchgen::BenchmarkSpec{}.seed;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--scale", scale, "full | small")->capture_default_str();
    app.add_option("--seed", seed, "generator seed")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        qcomb::benchgen::BenchmarkSpec spec;
        if (scale == "small") spec = qcomb::benchgen::BenchmarkSpec::small();
        else if (scale != "full") qcomb::fail("unknown --scale '", scale, "' (use full|small)");
        spec.seed = seed;
        auto files = qcomb::benchgen::generate(spec, out_dir);
        nlohmann::json j{{"status", "ok"},
                         {"interactome", files.interactome},
                         {"drug_targets", files.drug_targets},
                         {"disease_genes", files.disease_genes},
                         {"combinations", files.combinations},
                         {"manifest", files.manifest}};
        std::cout << j.dump() << std::endl;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
