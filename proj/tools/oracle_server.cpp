// Copyright 2026 The smattr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serves the seeded synthetic model over the oracle protocol, on stdio by
// default or on one TCP connection with --listen.

#include <unistd.h>

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "smattr/error.hpp"
#include "smattr/external_oracle.hpp"
#include "smattr/oracle.hpp"
#include "smattr/protocol.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic model behind the smattr oracle protocol"};
  app.set_help_flag("--help", "Print this help message and exit");
  int height = 0;
  int width = 0;
  int channels = 3;
  smattr::SyntheticConfig config;
  std::optional<int> port;
  bool zero_head = false;
  app.add_option("--h", height, "Input height")->required();
  app.add_option("--w", width, "Input width")->required();
  app.add_option("--c", channels, "Input channels");
  app.add_option("--seed", config.seed, "Weight seed");
  app.add_option("--d", config.feature_dim, "Feature dimension");
  app.add_option("--k", config.categories, "Category count");
  app.add_option("--listen", port, "Serve one TCP connection on this port");
  app.add_flag("--zero-head", zero_head,
               "Zero classifier head: unit evidence for every input");
  CLI11_PARSE(app, argc, argv);

  try {
    smattr::SyntheticOracle seeded(config, height, width, channels);
    const smattr::SyntheticOracle oracle =
        zero_head ? smattr::SyntheticOracle(
                        seeded.trunk().cast<float>(),
                        Eigen::MatrixXf::Zero(config.categories, config.feature_dim),
                        height, width, channels)
                  : std::move(seeded);
    if (port) {
      smattr::ServeTcpOnce(oracle, *port, [](int bound) {
        std::cerr << "listening " << bound << std::endl;
      });
    } else {
      smattr::protocol::LineChannel channel(STDIN_FILENO, STDOUT_FILENO);
      smattr::protocol::Serve(oracle, channel);
    }
  } catch (const smattr::Error& e) {
    std::cerr << "oracle server: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
