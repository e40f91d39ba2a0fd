// Offline generator for the newform data cache: computes weight-2 eigensystem
// tables (q-expansion coordinates, coefficient fields, Atkin-Lehner signs)
// level by level with the Manin symbol engine and writes one record file per
// level in the documented cache format.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "qp/modforms.hpp"

using namespace qp;

namespace {

// default per-level coefficient precision: enough for the model builder
// (5N terms) and the j-map certification bound at that level
size_t pipeline_precision(long N) {
  long g = ManinSymbols::genus_formula(N);
  long psi = psi_index(Int(N)).get_si();
  if (g < 2) return size_t(5 * N + 16);
  // r = smallest integer > psi / (2(g-1)) + 1/2; m = (2g-2) r + 1 + psi
  long twog2 = 2 * (g - 1);
  long r = (2 * psi + twog2) / (2 * twog2) + 1;
  long m = twog2 * r + 1 + psi;
  return size_t(std::max(5 * N, m + 10) + 6);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newform eigensystem table generator"};
  std::string out_dir = "data/newforms";
  std::vector<long> pipeline = {34, 38, 58, 68, 74, 76, 80, 85, 97, 98, 100, 103, 107, 109, 113, 121, 127};
  bool force = false;
  app.add_option("--out", out_dir, "output cache directory");
  app.add_option("--levels", pipeline, "pipeline levels (divisor closure is generated)");
  app.add_flag("--force", force, "regenerate files that already exist");
  CLI11_PARSE(app, argc, argv);

  std::map<long, size_t> need;  // level -> coefficient precision
  for (long N : pipeline) {
    size_t nm = pipeline_precision(N);
    for (auto& d : divisors(Int(N))) {
      long m = d.get_si();
      if (ManinSymbols::genus_formula(m) == 0) continue;
      need[m] = std::max(need[m], nm);
    }
  }

  std::filesystem::create_directories(out_dir);
  std::map<long, std::vector<NewformData>> computed;
  for (auto& [level, nmax] : need) {
    auto file = std::filesystem::path(out_dir) /
                ("N=" + std::to_string(level) + ",n=" + std::to_string(nmax) + ".nft");
    std::vector<NewformData> lower;
    for (auto& [l2, forms] : computed)
      if (l2 < level && level % l2 == 0)
        for (auto& f : forms) lower.push_back(f);
    if (!force && std::filesystem::exists(file)) {
      std::ifstream in(file, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      computed[level] = parse_newform_records(ss.str());
      std::cout << "level " << level << ": kept existing (" << computed[level].size()
                << " orbits)\n";
      continue;
    }
    std::cout << "level " << level << ": computing to precision " << nmax << " ... "
              << std::flush;
    auto t0 = std::chrono::steady_clock::now();
    auto forms = compute_newforms(level, nmax, lower);
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::ofstream out(file, std::ios::binary);
    out << write_newform_records(forms);
    std::cout << forms.size() << " orbits [" << dt << " ms]\n";
    computed[level] = std::move(forms);
  }
  return 0;
}
