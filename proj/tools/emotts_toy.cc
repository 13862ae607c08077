// Copyright 2026 The EmoTTS Authors
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

// Builds a small trained model directory from the synthetic toy corpus, for
// trying the CLI and the service without real data.

#include <iostream>

#include <CLI11.hpp>

#include "emotts/errors.h"
#include "emotts/pipeline/toy_bundle.h"

int main(int argc, char** argv) {
  CLI::App app{"Build a toy model directory"};
  std::filesystem::path out;
  emotts::pipeline::ToyBundleOptions opts;
  app.add_option("--out", out, "Output model directory")->required();
  app.add_option("--utterances", opts.utterances)->check(CLI::PositiveNumber);
  app.add_option("--steps", opts.acoustic_steps, "Acoustic training steps (0: untrained)");
  app.add_option("--hidden", opts.acoustic_hidden)->check(CLI::PositiveNumber);
  app.add_option("--classifier-epochs", opts.classifier_epochs, "0 skips the classifier");
  app.add_option("--seed", opts.seed);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    emotts::pipeline::build_toy_bundle(out, opts);
  } catch (const emotts::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  }
  std::cout << "toy model directory written to " << out.string() << "\n";
  return 0;
}
