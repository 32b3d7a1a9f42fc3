#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "atlas/report.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code(atlas::ErrorKind k) {
  switch (k) {
    case atlas::ErrorKind::Domain:
    case atlas::ErrorKind::Input: return 2;
    case atlas::ErrorKind::Solver: return 3;
    case atlas::ErrorKind::Verification: return 4;
  }
  return 1;
}

const char* kind_name(atlas::ErrorKind k) {
  switch (k) {
    case atlas::ErrorKind::Domain: return "domain";
    case atlas::ErrorKind::Input: return "input";
    case atlas::ErrorKind::Solver: return "solver";
    case atlas::ErrorKind::Verification: return "verification";
  }
  return "";
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw atlas::input_error(p.string() + ": cannot write");
  out << s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes geometry and asymptotic solutions near an irregular singularity"};
  app.require_subcommand(1);
  std::string spec_path, out_dir;
  bool svg = false;
  double tol = 0.0;
  int jobs = 0;
  for (const char* name : {"rays", "sectors", "solve", "subdominant", "verify", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("spec", spec_path, "problem spec (.json)")->required();
    sub->add_option("--out", out_dir, "directory for report.json and samples.csv");
    sub->add_flag("--svg", svg, "also write a ray diagram");
    sub->add_option("--tol", tol, "panel tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  std::string cmd = app.get_subcommands().front()->get_name();

  atlas::CommandOptions opt;
  opt.svg = svg;
  if (tol > 0) opt.tol = tol;
  if (jobs > 0) opt.jobs = jobs;
  if (const char* env = std::getenv("ATLAS_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) opt.jobs = static_cast<int>(v);
  }

  try {
    atlas::ProblemSpec ps = atlas::load_problem(spec_path);
    atlas::CommandResult res = atlas::run_command(cmd, ps, opt);
    std::string json = atlas::dump_json(res.report);
    if (out_dir.empty()) {
      std::cout << json;
      if (svg && !res.svg.empty()) std::cerr << "--svg needs --out, diagram not written\n";
    } else {
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "report.json", json);
      if (!res.csv.empty()) write_file(fs::path(out_dir) / "samples.csv", res.csv);
      if (!res.svg.empty()) write_file(fs::path(out_dir) / (cmd + ".svg"), res.svg);
    }
    if (res.verification_failed) {
      for (auto& c : res.report["checks"])
        if (!c["pass"].get<bool>()) std::cerr << "verification: " << c["check"].get<std::string>() << " failed\n";
      return 4;
    }
    return 0;
  } catch (const atlas::Error& e) {
    atlas::ordered_json err = {{"schema", atlas::report_schema}, {"command", cmd}, {"error", kind_name(e.kind())},
                               {"message", e.what()}};
    std::cerr << atlas::dump_json(err);
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
