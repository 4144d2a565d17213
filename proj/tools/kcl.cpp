#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcl/cli.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ascent and descent of composition operators on discrete Orlicz spaces"};
  app.require_subcommand(1);

  kcl::cli::AnalysisRequest req;
  std::string space, map, phi, values;
  std::size_t kmax = 0;
  std::uint64_t bound = 0, seed = 0;
  std::size_t truncate = 0;

  auto* analyze = app.add_subcommand("analyze", "theorem engine, matrix oracle and consistency report");
  analyze->add_option("--space", space, "space file (JSON)")->required();
  analyze->add_option("--max-k", kmax, "search bound for the measure criteria")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "kernel/range chains and Riesz decomposition only");
  oracle->add_option("--space", space, "space file (JSON)")->required();
  oracle->add_option("--max-k", kmax, "last power reported")->check(CLI::PositiveNumber);

  auto* norm = app.add_subcommand("norm", "modular, Luxemburg and Amemiya norms of a function");
  norm->add_option("--space", space, "space file (JSON)")->required();
  norm->add_option("--phi", phi, "power:<p> | powerlog:<p> | expml")->required();
  norm->add_option("--f", values, "comma-separated values, one per atom in file order")->required();

  auto* witness = app.add_subcommand("witness", "witness search for maps on the natural numbers");
  witness->add_option("--map", map, "affine:<a>:<b> | table:{i->j,...};affine:<a>:<b>")->required();
  witness->add_option("--depth", req.depth, "witness depth K")->check(CLI::PositiveNumber);
  witness->add_option("--bound", bound, "override the per-step search bound")->check(CLI::PositiveNumber);
  witness->add_option("--truncate", truncate, "also report the nullity chain of the n-point truncation")
      ->check(CLI::PositiveNumber);

  auto* campaign = app.add_subcommand("campaign", "seeded random functional graph consistency run");
  campaign->add_option("--n", req.graph_size, "maximum number of atoms per graph")->check(CLI::PositiveNumber);
  campaign->add_option("--count", req.count, "number of graphs");
  campaign->add_option("--seed", seed, "64-bit seed (KCL_SEED overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kcl::cli::kInputError;
  }

  try {
    if (!space.empty()) req.space_path = space;
    if (!map.empty()) req.map_spec = map;
    if (!phi.empty()) req.phi = phi;
    if (kmax > 0) req.kmax = kmax;
    if (bound > 0) req.bound = bound;
    if (truncate > 0) req.truncate = truncate;
    if (*analyze) req.command = kcl::cli::Command::analyze;
    if (*oracle) req.command = kcl::cli::Command::oracle;
    if (*norm) {
      req.command = kcl::cli::Command::norm;
      req.function_values = parse_values(values);
    }
    if (*witness) req.command = kcl::cli::Command::witness;
    if (*campaign) {
      req.command = kcl::cli::Command::campaign;
      req.seed = kcl::cli::effective_seed(seed);
    }
  } catch (const kcl::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kcl::cli::kInputError;
  } catch (const std::exception&) {
    std::cerr << "error: --f must be comma-separated numbers\n";
    return kcl::cli::kInputError;
  }
  return kcl::cli::run(req, std::cout, std::cerr);
}
