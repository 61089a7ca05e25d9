#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "partsim/combinatorics.hpp"
#include "partsim/errors.hpp"
#include "partsim/io.hpp"
#include "partsim/mutual_info.hpp"
#include "partsim/oracle.hpp"
#include "partsim/parallel.hpp"
#include "partsim/rand_index.hpp"
#include "partsim/random_models.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace partsim;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;
constexpr int exit_mismatch = 3;
constexpr int exit_undefined = 4;

Model parse_model(const std::string& s) {
  if (s == "none") return Model::none;
  if (s == "perm") return Model::perm;
  if (s == "num") return Model::num;
  if (s == "all") return Model::all;
  throw CLI::ValidationError("--model", "unknown model '" + s + "'");
}

MiBound parse_norm(const std::string& s) {
  if (s == "min") return MiBound::min;
  if (s == "sqrt") return MiBound::sqrt;
  if (s == "sum") return MiBound::sum;
  if (s == "max") return MiBound::max;
  if (s == "maxlogk") return MiBound::max_log_k;
  if (s == "logn") return MiBound::log_n;
  throw CLI::ValidationError("--norm", "unknown normalizer '" + s + "'");
}

double log_base_factor(const std::string& base) {
  if (base == "e") return 1.0;
  if (base == "2") return std::log(2.0);
  if (base == "10") return std::log(10.0);
  throw CLI::ValidationError("--log-base", "must be e, 2 or 10");
}

std::vector<std::uint64_t> parse_sizes(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stoull(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.empty()) throw CLI::ValidationError("sizes", "empty size list");
  return out;
}

std::string render6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

/// Builds a table sized for what the requested models actually need: a full
/// triangle for model all, a K-capped one for num, a stub otherwise.
Combinatorics make_comb(Model model, std::uint64_t n, std::uint64_t k_hint) {
  if (model == Model::all) return Combinatorics(n);
  if (model == Model::num) return Combinatorics(n, std::max<std::uint64_t>(k_hint, 1));
  return Combinatorics(std::min<std::uint64_t>(n, 1));
}

struct CompareArgs {
  std::string file_a, file_b;
  std::string measure = "rand";
  std::string model = "perm";
  bool one_sided = false;
  std::string reference_side = "b";
  std::string norm = "max";
  std::string log_base = "e";
  bool approx = false;
};

json comparison_json(const CompareArgs& args, const AlignedPair& pair) {
  const Clustering& a = pair.a;
  const Clustering& b = pair.b;
  const Side ref_side = args.reference_side == "a" ? Side::a : Side::b;
  const Model model = parse_model(args.model);
  const unsigned threads = thread_count_from_env();

  ScoreBreakdown score;
  double unit = 1.0;
  if (args.measure == "rand") {
    RandSpec spec{model, args.one_sided, ref_side, args.approx};
    std::uint64_t k_hint = std::max(a.n_clusters(), b.n_clusters());
    Combinatorics comb = make_comb(model, a.n_elements(), k_hint);
    score = rand_comparison(a, b, spec, comb);
  } else {
    MiSpec spec{model, args.one_sided, ref_side, parse_norm(args.norm)};
    std::uint64_t k_hint = std::max(a.n_clusters(), b.n_clusters());
    Combinatorics comb = make_comb(model, a.n_elements(), k_hint);
    score = mi_comparison(a, b, spec, comb, threads);
    unit = log_base_factor(args.log_base);
  }

  json out;
  out["measure"] = args.measure;
  out["model"] = args.model;
  out["sided"] = args.one_sided ? "one" : "two";
  if (args.measure == "mi") {
    out["normalizer"] = args.norm;
    out["log_base"] = args.log_base;
  }
  if (args.one_sided) out["reference_side"] = args.reference_side;
  out["raw"] = score.raw / unit;
  out["expectation"] = score.expectation / unit;
  out["max_bound"] = score.max_bound / unit;
  // The adjusted score is a ratio of MI differences; the log base cancels.
  out["adjusted"] = score.adjusted;
  out["n_elements"] = pair.a.n_elements();
  out["k_a"] = pair.a.n_clusters();
  out["k_b"] = pair.b.n_clusters();
  return out;
}

int cmd_compare(const CompareArgs& args) {
  AlignedPair pair = align(read_clustering_file(args.file_a),
                           read_clustering_file(args.file_b));
  std::cout << comparison_json(args, pair).dump(2) << "\n";
  return exit_ok;
}

struct ExpectArgs {
  std::string measure = "rand";
  std::string model = "all";
  std::uint64_t n = 0;
  std::uint64_t k_a = 0, k_b = 0;
  std::string sizes_a, sizes_b;
  bool approx = false;
  bool one_sided = false;
  std::string reference;
  std::string log_base = "e";
};

int cmd_expect(const ExpectArgs& args) {
  const Model model = parse_model(args.model);
  const unsigned threads = thread_count_from_env();
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw CLI::ValidationError("expect", "missing " + what);
  };

  std::optional<Clustering> ref;
  std::vector<std::uint64_t> ref_sizes;
  std::uint64_t n = args.n;
  if (args.one_sided) {
    need(!args.reference.empty(), "--reference file for one-sided expectation");
    ref = read_clustering_file(args.reference).clustering();
    ref_sizes = ref->sizes();
    if (n == 0) n = ref->n_elements();
    if (n != ref->n_elements())
      throw std::domain_error("--n disagrees with the reference file");
  }

  double value = 0.0;
  bool asymptotic = args.approx;
  json params;
  if (args.measure == "rand") {
    switch (model) {
      case Model::perm: {
        need(args.one_sided ? !args.sizes_a.empty()
                            : !args.sizes_a.empty() && !args.sizes_b.empty(),
             "--sizes-a/--sizes-b (perm is size-sequence conditioned)");
        auto sa = parse_sizes(args.sizes_a);
        std::uint64_t total = 0;
        for (auto s : sa) total += s;
        if (n == 0) n = total;
        auto sb = args.one_sided ? ref_sizes : parse_sizes(args.sizes_b);
        value = expected_rand_perm(sa, sb, n);
        params["sizes_a"] = sa;
        params["sizes_b"] = sb;
        asymptotic = false;
        break;
      }
      case Model::num: {
        need(args.k_a > 0, "--ka");
        if (args.approx && args.one_sided)
          throw CLI::ValidationError("--approx",
                                     "asymptotic forms are two-sided only");
        if (args.approx) {
          need(args.k_b > 0, "--kb");
          value = expected_rand_num_approx(args.k_a, args.k_b);
          params["k_a"] = args.k_a;
          params["k_b"] = args.k_b;
          break;
        }
        need(n > 0, "--n");
        Combinatorics comb(n, std::max(args.k_a, args.k_b));
        if (args.one_sided) {
          value = expected_rand_num_one_sided(args.k_a, n, ref_sizes, comb);
          params["k_a"] = args.k_a;
        } else {
          need(args.k_b > 0, "--kb");
          value = expected_rand_num(args.k_a, args.k_b, n, comb);
          params["k_a"] = args.k_a;
          params["k_b"] = args.k_b;
        }
        break;
      }
      case Model::all: {
        need(n > 0, "--n");
        if (args.approx && args.one_sided)
          throw CLI::ValidationError("--approx",
                                     "asymptotic forms are two-sided only");
        if (args.approx) {
          value = expected_rand_all_approx(n);
        } else {
          Combinatorics comb(n);
          value = args.one_sided ? expected_rand_all_one_sided(n, ref_sizes, comb)
                                 : expected_rand_all(n, comb);
        }
        break;
      }
      case Model::none:
        throw CLI::ValidationError("--model", "expectation needs perm, num or all");
    }
  } else {
    if (args.approx)
      throw CLI::ValidationError("--approx", "no asymptotic mutual information form");
    const double unit = log_base_factor(args.log_base);
    switch (model) {
      case Model::perm: {
        need(!args.sizes_a.empty(), "--sizes-a");
        auto sa = parse_sizes(args.sizes_a);
        std::uint64_t total = 0;
        for (auto s : sa) total += s;
        if (n == 0) n = total;
        auto sb = args.one_sided ? ref_sizes : parse_sizes(args.sizes_b);
        need(!sb.empty(), "--sizes-b");
        value = expected_mi_perm(sa, sb, n);
        params["sizes_a"] = sa;
        params["sizes_b"] = sb;
        break;
      }
      case Model::num: {
        need(args.k_a > 0 && n > 0, "--ka and --n");
        Combinatorics comb(n, std::max(args.k_a, args.k_b));
        if (args.one_sided) {
          value = expected_mi_num_one_sided(args.k_a, n, ref_sizes, comb);
          params["k_a"] = args.k_a;
        } else {
          need(args.k_b > 0, "--kb");
          value = expected_mi_num(args.k_a, args.k_b, n, comb, threads);
          params["k_a"] = args.k_a;
          params["k_b"] = args.k_b;
        }
        break;
      }
      case Model::all: {
        need(n > 0, "--n");
        Combinatorics comb(n);
        value = args.one_sided ? expected_mi_all_one_sided(n, ref_sizes, comb)
                               : expected_mi_all(n, comb, threads);
        break;
      }
      case Model::none:
        throw CLI::ValidationError("--model", "expectation needs perm, num or all");
    }
    value /= unit;
  }

  json out;
  out["measure"] = args.measure;
  out["model"] = args.model;
  out["sided"] = args.one_sided ? "one" : "two";
  out["evaluation"] = asymptotic ? "asymptotic" : "exact";
  if (n > 0) out["n"] = n;
  for (auto& [key, val] : params.items()) out[key] = val;
  if (args.measure == "mi") out["log_base"] = args.log_base;
  out["expectation"] = value;
  std::cout << out.dump(2) << "\n";
  return exit_ok;
}

struct RankArgs {
  std::vector<std::string> files;
  std::string measure = "rand";
  std::string model = "perm";
  std::string norm = "max";
  std::string format = "tsv";
  std::string log_base = "e";
};

int cmd_rank(const RankArgs& args) {
  if (args.files.size() < 2)
    throw CLI::ValidationError("rank", "need at least 2 clustering files");

  std::vector<LabeledClustering> loaded;
  loaded.reserve(args.files.size());
  for (const auto& f : args.files) loaded.push_back(read_clustering_file(f));

  struct Row {
    std::string name_a, name_b;
    double raw, expectation, adjusted;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < loaded.size(); ++i)
    for (std::size_t j = i + 1; j < loaded.size(); ++j) pairs.emplace_back(i, j);

  std::vector<Row> rows(pairs.size());
  const unsigned threads = thread_count_from_env();
  CompareArgs cargs;
  cargs.measure = args.measure;
  cargs.model = args.model;
  cargs.norm = args.norm;
  cargs.log_base = args.log_base;
  parallel_for_slots(pairs.size(), threads, [&](std::size_t idx) {
    auto [i, j] = pairs[idx];
    AlignedPair pair = align(loaded[i], loaded[j]);
    json c = comparison_json(cargs, pair);
    rows[idx] = Row{args.files[i], args.files[j], c["raw"].get<double>(),
                    c["expectation"].get<double>(), c["adjusted"].get<double>()};
  });

  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.adjusted != y.adjusted) return x.adjusted > y.adjusted;
    if (x.name_a != y.name_a) return x.name_a < y.name_a;
    return x.name_b < y.name_b;
  });

  if (args.format == "json") {
    json out = json::array();
    for (const Row& r : rows) {
      json jr;
      jr["a"] = r.name_a;
      jr["b"] = r.name_b;
      jr["raw"] = r.raw;
      jr["expectation"] = r.expectation;
      jr["adjusted"] = r.adjusted;
      out.push_back(jr);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "a\tb\traw\texpectation\tadjusted\n";
    for (const Row& r : rows)
      std::cout << r.name_a << '\t' << r.name_b << '\t' << render6(r.raw) << '\t'
                << render6(r.expectation) << '\t' << render6(r.adjusted) << "\n";
  }
  return exit_ok;
}

struct SampleArgs {
  std::string model = "all";
  std::uint64_t n = 0, k = 0;
  std::string template_file;
  std::uint64_t seed = 0;
  std::uint64_t count = 1;
  std::string out_prefix = "sample";
};

int cmd_sample(const SampleArgs& args) {
  const Model model = parse_model(args.model);
  EnsembleSpec spec;
  spec.model = model;
  std::vector<std::string> ids;
  switch (model) {
    case Model::perm: {
      if (args.template_file.empty())
        throw CLI::ValidationError("--template", "perm sampling needs a template file");
      LabeledClustering base = read_clustering_file(args.template_file);
      ids = base.element_ids;
      spec.perm_shape = base.clustering();
      spec.n = spec.perm_shape->n_elements();
      break;
    }
    case Model::num:
      if (args.n == 0 || args.k == 0)
        throw CLI::ValidationError("sample", "num sampling needs --n and --k");
      spec.n = args.n;
      spec.k = args.k;
      break;
    case Model::all:
      if (args.n == 0) throw CLI::ValidationError("sample", "all sampling needs --n");
      spec.n = args.n;
      break;
    case Model::none:
      throw CLI::ValidationError("--model", "sampling needs perm, num or all");
  }

  Combinatorics comb = make_comb(model, spec.n, spec.k);
  Rng rng(args.seed);
  for (std::uint64_t i = 0; i < args.count; ++i) {
    Clustering c = sample_clustering(spec, comb, rng);
    std::string path = args.out_prefix + "_" + std::to_string(i) + ".clu";
    write_clustering_file(path, c, ids);
    std::cout << path << "\n";
  }
  return exit_ok;
}

struct PaArgs {
  std::uint64_t n = 200;
  std::uint64_t k = 10;
  std::uint64_t steps = 100000;
  std::uint64_t record_every = 100;
  std::uint64_t seed = 1;
};

int cmd_experiment_pa(const PaArgs& args) {
  if (args.k < 2)
    throw CLI::ValidationError("--k", "the walk needs at least 2 clusters");
  if (args.n < args.k)
    throw CLI::ValidationError("--n", "need at least one element per cluster");

  // Balanced start: sizes as equal as possible.
  std::vector<std::uint32_t> memb(args.n);
  for (std::uint64_t i = 0; i < args.n; ++i)
    memb[i] = static_cast<std::uint32_t>(i % args.k);
  Clustering start = Clustering::from_membership(memb);

  Combinatorics comb(args.n, args.k);
  Rng rng(args.seed);
  auto points = pa_randomize(start, args.steps, args.record_every, comb, rng);

  std::cout << "step\tentropy_bits\tari_perm\tari_num\n";
  for (const auto& p : points)
    std::cout << p.step << '\t' << render6(p.entropy_bits) << '\t'
              << render6(p.ari_perm) << '\t' << render6(p.ari_num) << "\n";
  return exit_ok;
}

struct VerifyArgs {
  std::uint64_t max_n = 6;
  double perturb = 0.0;
};

int cmd_oracle_verify(const VerifyArgs& args) {
  if (args.max_n > oracle::enum_ceiling) {
    // Same refusal the enumeration core produces, surfaced as a usage error.
    try {
      oracle::for_each_partition(args.max_n, [](std::span<const std::uint8_t>) {});
    } catch (const std::domain_error& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
    return exit_usage;
  }
  if (args.max_n < 2) {
    std::cerr << "error: --max-n below 2 leaves nothing to check\n";
    return exit_usage;
  }

  Combinatorics comb(std::max<std::uint64_t>(args.max_n, 10));
  auto checks = oracle::verify_formulas(args.max_n, comb, args.perturb);

  bool all_ok = true;
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    all_ok = all_ok && c.passed;
    std::printf("%-6s %-*s  n<=%llu  cases=%-6llu  max_rel_err=%.3e  tol=%.0e\n",
                c.passed ? "PASS" : "FAIL", static_cast<int>(width), c.name.c_str(),
                static_cast<unsigned long long>(c.max_n),
                static_cast<unsigned long long>(c.cases), c.max_rel_error,
                c.tolerance);
  }
  std::printf("%s: %zu/%zu formula families match the enumeration oracle\n",
              all_ok ? "OK" : "FAILED",
              static_cast<std::size_t>(
                  std::count_if(checks.begin(), checks.end(),
                                [](const auto& c) { return c.passed; })),
              checks.size());
  return all_ok ? exit_ok : exit_failure;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Clustering similarity under random models"};
  app.require_subcommand(1);

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Score two clustering files");
  c->add_option("file_a", cmp.file_a)->required();
  c->add_option("file_b", cmp.file_b)->required();
  c->add_option("--measure", cmp.measure)->check(CLI::IsMember({"rand", "mi"}));
  c->add_option("--model", cmp.model)->check(CLI::IsMember({"none", "perm", "num", "all"}));
  c->add_flag("--one-sided", cmp.one_sided);
  auto* ref_side_opt =
      c->add_option("--reference-side", cmp.reference_side)->check(CLI::IsMember({"a", "b"}));
  c->add_option("--norm", cmp.norm)
      ->check(CLI::IsMember({"min", "sqrt", "sum", "max", "maxlogk", "logn"}));
  c->add_option("--log-base", cmp.log_base)->check(CLI::IsMember({"e", "2", "10"}));
  c->add_flag("--approx", cmp.approx);

  ExpectArgs exp;
  auto* e = app.add_subcommand("expect", "Closed-form expectation of a measure");
  e->add_option("--measure", exp.measure)->check(CLI::IsMember({"rand", "mi"}));
  e->add_option("--model", exp.model)->check(CLI::IsMember({"perm", "num", "all"}));
  e->add_option("--n", exp.n);
  e->add_option("--ka", exp.k_a);
  e->add_option("--kb", exp.k_b);
  e->add_option("--sizes-a", exp.sizes_a);
  e->add_option("--sizes-b", exp.sizes_b);
  e->add_flag("--approx", exp.approx);
  e->add_flag("--one-sided", exp.one_sided);
  e->add_option("--reference", exp.reference);
  e->add_option("--log-base", exp.log_base)->check(CLI::IsMember({"e", "2", "10"}));

  RankArgs rank;
  auto* r = app.add_subcommand("rank", "Rank all pairs of clustering files");
  r->add_option("files", rank.files)->required()->expected(-2);
  r->add_option("--measure", rank.measure)->check(CLI::IsMember({"rand", "mi"}));
  r->add_option("--model", rank.model)->check(CLI::IsMember({"none", "perm", "num", "all"}));
  r->add_option("--norm", rank.norm)
      ->check(CLI::IsMember({"min", "sqrt", "sum", "max", "maxlogk", "logn"}));
  r->add_option("--format", rank.format)->check(CLI::IsMember({"tsv", "json"}));
  r->add_option("--log-base", rank.log_base)->check(CLI::IsMember({"e", "2", "10"}));

  SampleArgs smp;
  auto* s = app.add_subcommand("sample", "Draw clusterings from a random model");
  s->add_option("--model", smp.model)->check(CLI::IsMember({"perm", "num", "all"}));
  s->add_option("--n", smp.n);
  s->add_option("--k", smp.k);
  s->add_option("--template", smp.template_file);
  s->add_option("--seed", smp.seed)->required();
  s->add_option("--count", smp.count);
  s->add_option("--out-prefix", smp.out_prefix);

  auto* x = app.add_subcommand("experiment", "Reference experiments");
  PaArgs pa;
  auto* xp = x->add_subcommand("pref-attach", "Size-biased reshuffling trajectory");
  xp->add_option("--n", pa.n);
  xp->add_option("--k", pa.k);
  xp->add_option("--steps", pa.steps);
  xp->add_option("--record-every", pa.record_every);
  xp->add_option("--seed", pa.seed);
  x->require_subcommand(1);

  auto* o = app.add_subcommand("oracle", "Enumeration oracle");
  VerifyArgs ver;
  auto* ov = o->add_subcommand("verify", "Check every formula against enumeration");
  ov->add_option("--max-n", ver.max_n);
  ov->add_option("--perturb", ver.perturb)
      ->description("negative-control hook: scales formula outputs by 1+x");
  o->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);  // --help
    app.exit(err);
    return exit_usage;
  }

  if (c->parsed()) {
    if (cmp.one_sided && ref_side_opt->count() == 0)
      throw CLI::ValidationError("--one-sided", "needs --reference-side {a|b}");
    return cmd_compare(cmp);
  }
  if (e->parsed()) return cmd_expect(exp);
  if (r->parsed()) return cmd_rank(rank);
  if (s->parsed()) return cmd_sample(smp);
  if (x->parsed() && xp->parsed()) return cmd_experiment_pa(pa);
  if (o->parsed() && ov->parsed()) return cmd_oracle_verify(ver);
  return exit_usage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const partsim::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const partsim::ElementMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_mismatch;
  } catch (const partsim::UndefinedAdjustmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_undefined;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_failure;
  }
}
