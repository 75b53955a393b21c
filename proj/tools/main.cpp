#include <iostream>

#include "commands.hpp"
#include "rnip/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rnip: raw image pair preparation, denoising and joint compression"};
  app.require_subcommand(1);
  int threads = 1;
  unsigned long long seed = 0;
  app.add_option("--threads", threads, "Worker threads")->default_val(1)->check(CLI::Range(1, 256));
  app.add_option("--seed", seed, "Base seed for every random stream")->default_val(0);

  int exit_code = rnip::cli::kExitOk;
  rnip::cli::register_prepare(app, exit_code, threads, seed);
  rnip::cli::register_image_commands(app, exit_code, threads, seed);
  rnip::cli::register_nn_commands(app, exit_code, threads, seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rnip::cli::kExitOk : rnip::cli::kExitUsage;
  } catch (const rnip::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == rnip::ErrorCode::ParseError ? rnip::cli::kExitUsage : rnip::cli::kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rnip::cli::kExitPartial;
  }
  return exit_code;
}
