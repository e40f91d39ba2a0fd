// Newform record IO, disk cache, and the fetch-by-level client.

#include <fstream>
#include <sstream>

#include "qp/modforms.hpp"
#include "qp/numberfield.hpp"
#include "qp/zfactor.hpp"

namespace qp {

std::string write_newform_records(const std::vector<NewformData>& orbits) {
  std::ostringstream os;
  for (auto& f : orbits) {
    os << "begin " << f.level << " 2 " << f.label << "\n";
    os << "poly";
    for (auto& c : f.field_poly) os << " " << c.get_str();
    os << "\n";
    for (auto& [q, s] : f.al_signs) os << "al " << q << " " << s << "\n";
    for (size_t n = 1; n <= f.an.size(); ++n) {
      os << "an " << n;
      for (auto& x : f.an[n - 1]) os << " " << x.get_str();
      os << "\n";
    }
    os << "end\n";
  }
  return os.str();
}

std::vector<NewformData> parse_newform_records(const std::string& text) {
  std::vector<NewformData> out;
  std::istringstream is(text);
  std::string line;
  NewformData cur;
  bool open = false;
  size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("newform record line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "begin") {
      if (open) fail("nested begin");
      cur = NewformData{};
      long w = 0;
      ls >> cur.level >> w >> cur.label;
      if (w != 2) fail("unsupported weight");
      open = true;
    } else if (tok == "poly") {
      if (!open) fail("poly outside record");
      std::string c;
      while (ls >> c) cur.field_poly.push_back(parse_int(c));
      if (cur.field_poly.size() < 2 || cur.field_poly.back() != 1) fail("polynomial not monic");
      cur.dim = unsigned(cur.field_poly.size()) - 1;
    } else if (tok == "al") {
      long q = 0;
      int s = 0;
      ls >> q >> s;
      if (s != 1 && s != -1) fail("bad eigenvalue sign");
      cur.al_signs.emplace_back(q, s);
    } else if (tok == "an") {
      size_t n = 0;
      ls >> n;
      if (n != cur.an.size() + 1) fail("a_n out of order");
      std::vector<Rat> v;
      std::string c;
      while (ls >> c) v.push_back(parse_rat(c));
      if (v.size() != cur.dim) fail("coordinate count mismatch");
      cur.an.push_back(std::move(v));
    } else if (tok == "end") {
      if (!open) fail("end outside record");
      out.push_back(std::move(cur));
      open = false;
    } else {
      fail("unknown token '" + tok + "'");
    }
  }
  if (open) throw std::runtime_error("newform records: unterminated block");
  return out;
}

namespace {

std::filesystem::path cache_file(const NewformSource& src, long level, size_t nmax) {
  return src.cache_dir / ("N=" + std::to_string(level) + ",n=" + std::to_string(nmax) + ".nft");
}

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// best cached precision >= nmax for a level (exact match or any larger one)
std::optional<std::string> cache_lookup(const NewformSource& src, long level, size_t nmax) {
  if (auto s = read_file(cache_file(src, level, nmax))) return s;
  std::string prefix = "N=" + std::to_string(level) + ",n=";
  size_t best = 0;
  std::filesystem::path best_path;
  std::error_code ec;
  for (auto& e : std::filesystem::directory_iterator(src.cache_dir, ec)) {
    auto name = e.path().filename().string();
    if (name.rfind(prefix, 0) != 0) continue;
    size_t n = std::strtoul(name.c_str() + prefix.size(), nullptr, 10);
    if (n >= nmax && (best == 0 || n < best)) {
      best = n;
      best_path = e.path();
    }
  }
  if (best) return read_file(best_path);
  return std::nullopt;
}

std::string fetch_remote(const NewformSource& src, long level, size_t nmax);

std::vector<NewformData> level_orbits(const NewformSource& src, long level, size_t nmax) {
  auto text = cache_lookup(src, level, nmax);
  if (!text) {
    if (src.offline)
      throw std::runtime_error("newform cache miss for level " + std::to_string(level) +
                               " at precision " + std::to_string(nmax) +
                               " (offline mode; populate the cache or run the generator)");
    text = fetch_remote(src, level, nmax);
    std::filesystem::create_directories(src.cache_dir);
    std::ofstream out(cache_file(src, level, nmax), std::ios::binary);
    out << *text;
  }
  auto orbits = parse_newform_records(*text);
  for (auto& f : orbits) {
    if (f.level != level) throw std::runtime_error("newform record level mismatch");
    if (f.an.size() + 1 < nmax)
      throw std::runtime_error("insufficient precision in newform record for level " +
                               std::to_string(level));
  }
  return orbits;
}

}  // namespace

std::vector<NewformData> ingest_newforms(const NewformSource& src, long N, size_t nmax) {
  std::vector<NewformData> out;
  for (auto& d : divisors(Int(N))) {
    long m = d.get_si();
    if (ManinSymbols::genus_formula(m) == 0) continue;
    auto orbits = level_orbits(src, m, nmax);
    for (auto& f : orbits) out.push_back(std::move(f));
  }
  // validation: a_1 = 1, multiplicativity spot checks
  for (auto& f : out) {
    QPoly h;
    for (auto& c : f.field_poly) h.c.emplace_back(c);
    h.normalize(RatField{});
    NumberField K(h);
    if (!K.eq(f.a(1), K.one()))
      throw std::runtime_error("newform validation: a_1 != 1");
    size_t limit = f.an.size();
    for (auto [m1, n1] : std::initializer_list<std::pair<size_t, size_t>>{
             {2, 3}, {2, 5}, {3, 5}, {4, 3}, {2, 7}, {9, 2}, {5, 7}, {3, 8}}) {
      if (m1 * n1 > limit) continue;
      if (gcd(Int(m1), Int(n1)) != 1) continue;
      if (!K.eq(f.a(m1 * n1), K.mul(f.a(m1), f.a(n1))))
        throw std::runtime_error("newform validation: multiplicativity fails at " +
                                 std::to_string(m1) + "*" + std::to_string(n1));
    }
  }
  // dimension bookkeeping: sum over M | N of sigma_0(N/M) dim(new at M) = genus
  long total = 0;
  for (auto& f : out) total += long(divisors(Int(N / f.level)).size()) * long(f.dim);
  if (total != ManinSymbols::genus_formula(N))
    throw std::runtime_error("newform validation: dimensions do not add up to the genus");
  return out;
}

}  // namespace qp

// ----------------------------------------------------------------- remote

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include <thread>

namespace qp {
namespace {

std::string fetch_remote(const NewformSource& src, long level, size_t nmax) {
  std::string path = "/newforms?level=" + std::to_string(level) +
                     "&nmax=" + std::to_string(nmax);
  for (int attempt = 0; attempt <= src.retries; ++attempt) {
    if (attempt) std::this_thread::sleep_for(std::chrono::milliseconds(200 << attempt));
    httplib::Client cli(src.base_url);
    cli.set_read_timeout(30, 0);
    auto res = cli.Get(path);
    if (res && res->status == 200) return res->body;
  }
  throw std::runtime_error("newform service unreachable for level " + std::to_string(level));
}

}  // namespace
}  // namespace qp
