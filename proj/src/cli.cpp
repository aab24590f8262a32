#include "popmatch/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "popmatch/classifier.hpp"
#include "popmatch/election.hpp"
#include "popmatch/generators.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/proposal_engine.hpp"
#include "popmatch/reductions.hpp"

namespace popmatch::cli {

namespace {

using nlohmann::json;

json matching_json(const Instance& inst, const Matching& m) {
  json edges = json::array();
  for (Edge e : m.edges()) edges.push_back({inst.name(e.u), inst.name(e.v)});
  return edges;
}

std::string witness_text(const Instance& inst, const Witness& w) { return serialize_witness(inst, w); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

// ---- subcommands ----

struct SolveArgs {
  bool stable = false, dominant = false;
  std::string instance, witness_out;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  if (a.stable == a.dominant) throw CLI::ValidationError("solve", "choose exactly one of --stable, --dominant");
  Instance inst = parse_instance(read_file(a.instance));
  if (a.stable) {
    out << serialize_matching(inst, solve_stable(inst));
    return kYes;
  }
  auto [m, w] = solve_dominant(inst);
  out << serialize_matching(inst, m);
  if (!a.witness_out.empty()) {
    write_file(a.witness_out, witness_text(inst, w));
  } else {
    out << "# witness\n" << witness_text(inst, w);
  }
  return kYes;
}

struct VerifyArgs {
  bool stable = false, popular = false, dominant = false, witness = false;
  std::vector<std::string> files;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  int chosen = a.stable + a.popular + a.dominant + a.witness;
  if (chosen != 1)
    throw CLI::ValidationError("verify", "choose exactly one of --stable, --popular, --dominant, --witness");
  const size_t need = a.witness ? 3 : 2;
  if (a.files.size() != need)
    throw CLI::ValidationError("verify", "expected " + std::to_string(need) + " files");
  Instance inst = parse_instance(read_file(a.files[0]));
  Matching m = parse_matching(inst, read_file(a.files[1]));

  if (a.stable) {
    auto r = is_stable(inst, m);
    if (r.stable) {
      out << "STABLE\n";
      return kYes;
    }
    out << "UNSTABLE: blocking edge " << format_edge(inst, *r.blocking) << '\n';
    return kNo;
  }
  if (a.popular) {
    if (inst.bipartite()) {
      auto r = max_margin_weight(inst, m);
      if (r.margin <= 0) {
        out << "POPULAR\n";
        if (inst.size() <= kDefaultWitnessBound) {
          if (auto w = find_witness_small(inst, m)) out << "# witness\n" << witness_text(inst, *w);
        }
        return kYes;
      }
      out << "NOT POPULAR: delta " << r.margin << " for " << format_matching(inst, r.better) << '\n';
    }
    auto s = is_popular_structure(inst, m);
    if (s.popular) {
      out << "POPULAR\n";
      return kYes;
    }
    if (!inst.bipartite()) out << "NOT POPULAR\n";
    if (s.structure) out << describe(inst, *s.structure) << '\n';
    return kNo;
  }
  if (a.dominant) {
    auto r = check_dominant(inst, m);
    if (r.dominant) {
      out << "DOMINANT\n";
      return kYes;
    }
    if (!r.popular) {
      out << "NOT DOMINANT: not popular\n";
    } else {
      out << "NOT DOMINANT: augmenting path <";
      for (size_t i = 0; i < r.augmenting_path.size(); ++i) out << (i ? "," : "") << inst.name(r.augmenting_path[i]);
      out << ">\n";
    }
    return kNo;
  }
  Witness w = parse_witness(inst, read_file(a.files[2]));
  auto r = verify_witness(inst, m, w);
  if (r.ok) {
    out << "WITNESS OK\n";
    return kYes;
  }
  out << "WITNESS INVALID\n";
  for (const auto& v : r.violations) out << v << '\n';
  return kNo;
}

struct ElectionArgs {
  std::string instance, first, second;
};

int cmd_election(const ElectionArgs& a, std::ostream& out) {
  Instance inst = parse_instance(read_file(a.instance));
  Matching x = parse_matching(inst, read_file(a.first));
  Matching y = parse_matching(inst, read_file(a.second));
  out << "phi(A,B) " << phi(inst, x, y) << '\n'
      << "phi(B,A) " << phi(inst, y, x) << '\n'
      << "delta " << delta(inst, x, y) << '\n';
  return kYes;
}

struct ClassifyArgs {
  std::string instance;
  bool all_stable = false, all_dominant = false, exhaustive = false, pairwise = false, json = false;
  int cap = 16;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  if (a.all_stable == a.all_dominant)
    throw CLI::ValidationError("classify", "choose exactly one of --all-popular-stable, --all-popular-dominant");
  Instance inst = parse_instance(read_file(a.instance));
  std::optional<Matching> counter;
  if (a.all_stable) {
    counter = a.pairwise ? exists_unstable_popular_pairwise(inst) : exists_unstable_popular(inst);
  } else {
    if (!a.exhaustive)
      throw CLI::ValidationError("classify", "--all-popular-dominant is decided by enumeration; pass --exhaustive");
    int cap = std::getenv("POPMATCH_CAP") ? oracle_cap(a.cap) : a.cap;
    if (inst.size() > cap)
      throw ValidationError("instance has " + std::to_string(inst.size()) + " vertices; --exhaustive cap is " +
                            std::to_string(cap));
    auto rep = classify_exhaustive(inst, cap);
    for (int i : rep.popular)
      if (!rep.is_dominant[i]) {
        counter = rep.matchings[i];
        break;
      }
  }
  if (a.json) {
    json j = {{"verdict", counter ? "no" : "yes"}};
    if (counter) j["counterexample"] = matching_json(inst, *counter);
    out << j.dump() << '\n';
  } else {
    out << "VERDICT: " << (counter ? "NO" : "YES") << '\n';
    if (counter) out << serialize_matching(inst, *counter);
  }
  return counter ? kNo : kYes;
}

struct ReduceArgs {
  std::string cnf, target, output;
  bool verify = false;
  long long limit = VerifyOptions{}.enumeration_cap;
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out) {
  CnfFormula f = parse_dimacs(read_file(a.cnf));
  Target t = parse_target(a.target);
  if (a.verify) {
    VerifyOptions opt;
    opt.enumeration_cap = a.limit;
    auto rep = verify_reduction(f, t, opt);
    out << format_report(rep);
    return rep.confirmed() ? kYes : kNo;
  }
  auto [inst, gm] = build_target(normalize_3sat(f), t);
  if (a.output.empty()) {
    out << serialize_gadget_instance(inst, gm);
  } else {
    write_file(a.output, serialize_gadget_instance(inst, gm));
    write_file(a.output + ".map", serialize_gadget_map(inst, gm));
    out << "wrote " << a.output << " and " << a.output << ".map (" << inst.size() << " vertices)\n";
  }
  return kYes;
}

struct OracleArgs {
  std::string instance;
  bool json = false;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  Instance inst = parse_instance(read_file(a.instance));
  auto rep = classify_exhaustive(inst);
  auto pick = [&](const std::vector<int>& idx) {
    json arr = json::array();
    for (int i : idx) arr.push_back(matching_json(inst, rep.matchings[i]));
    return arr;
  };
  if (a.json) {
    std::vector<int> all(rep.matchings.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    json j = {{"matchings", pick(all)},
              {"stable", pick(rep.stable)},
              {"popular", pick(rep.popular)},
              {"dominant", pick(rep.dominant)},
              {"min_popular_size", rep.min_popular_size},
              {"max_popular_size", rep.max_popular_size}};
    out << j.dump() << '\n';
    return kYes;
  }
  out << "matchings " << rep.matchings.size() << '\n';
  auto section = [&](const char* name, const std::vector<int>& idx) {
    out << name << ' ' << idx.size() << '\n';
    for (int i : idx) out << "  " << format_matching(inst, rep.matchings[i]) << '\n';
  };
  section("stable", rep.stable);
  section("popular", rep.popular);
  section("dominant", rep.dominant);
  out << "popular sizes " << rep.min_popular_size << ".." << rep.max_popular_size << '\n';
  return kYes;
}

struct CorpusArgs {
  bool random = false, check = false, json = false;
  std::vector<std::string> params;
  std::string out_dir;
};

int cmd_corpus(const CorpusArgs& a, std::ostream& out) {
  if (!a.random) throw CLI::ValidationError("corpus", "only --random corpora are supported");
  std::map<std::string, std::string> kv = {
      {"n", "6"}, {"count", "10"}, {"seed", "1"}, {"density", "0.5"}, {"kind", "marriage"}};
  for (const auto& p : a.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos || !kv.count(p.substr(0, eq)))
      throw CLI::ValidationError("corpus", "bad parameter '" + p + "' (n=, count=, seed=, density=, kind=)");
    kv[p.substr(0, eq)] = p.substr(eq + 1);
  }
  int n = 0, count = 0;
  unsigned long long seed = 0;
  double density = 0;
  try {
    n = std::stoi(kv["n"]);
    count = std::stoi(kv["count"]);
    seed = std::stoull(kv["seed"]);
    density = std::stod(kv["density"]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("corpus", "numeric parameter expected");
  }
  if (n < 0 || count < 0 || density < 0 || density > 1)
    throw CLI::ValidationError("corpus", "parameters out of range");
  const bool roommates = kv["kind"] == "roommates";
  if (!roommates && kv["kind"] != "marriage") throw CLI::ValidationError("corpus", "kind is marriage or roommates");

  Rng rng(seed);
  bool all_agree = true;
  for (int i = 0; i < count; ++i) {
    Instance inst = roommates ? random_roommates(rng, n, density) : random_marriage(rng, (n + 1) / 2, n / 2, density);
    std::string text = serialize_instance(inst);
    if (!a.out_dir.empty()) {
      std::filesystem::create_directories(a.out_dir);
      char name[64];
      std::snprintf(name, sizeof name, "rand_%llu_%04d.inst", seed, i);
      write_file((std::filesystem::path(a.out_dir) / name).string(), text);
    }
    if (a.check) {
      auto problem = check_agreement(inst);
      all_agree = all_agree && !problem;
      if (a.json) {
        json j = {{"index", i}, {"vertices", inst.size()}, {"agree", !problem}};
        if (problem) j["detail"] = *problem;
        out << j.dump() << '\n';
      } else {
        out << "instance " << i << ": " << (problem ? "DISAGREE " + *problem : std::string("agree")) << '\n';
      }
    } else if (a.out_dir.empty()) {
      out << "# instance " << i << '\n' << text;
    }
  }
  return all_agree ? kYes : kNo;
}

}  // namespace

std::optional<std::string> check_agreement(const Instance& inst) {
  auto rep = classify_exhaustive(inst);
  for (size_t i = 0; i < rep.matchings.size(); ++i) {
    const Matching& m = rep.matchings[i];
    auto where = [&](const char* test) {
      return std::string(test) + " disagrees on " + format_matching(inst, m);
    };
    if (is_stable(inst, m).stable != static_cast<bool>(rep.is_stable[i])) return where("is_stable");
    if (inst.bipartite() && is_popular_weight(inst, m) != static_cast<bool>(rep.is_popular[i]))
      return where("is_popular_weight");
    if (is_popular_structure(inst, m).popular != static_cast<bool>(rep.is_popular[i]))
      return where("is_popular_structure");
    if (is_dominant(inst, m) != static_cast<bool>(rep.is_dominant[i])) return where("is_dominant");
  }
  return std::nullopt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"popmatch: stable, popular and dominant matchings"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s_solve = app.add_subcommand("solve", "stable or dominant matching");
  s_solve->add_flag("--stable", solve.stable, "stable matching (men-proposing)");
  s_solve->add_flag("--dominant", solve.dominant, "dominant matching with witness");
  s_solve->add_option("--witness-out", solve.witness_out, "write the witness here instead of stdout");
  s_solve->add_option("instance", solve.instance)->required();

  VerifyArgs verify;
  auto* s_verify = app.add_subcommand("verify", "check a matching");
  s_verify->add_flag("--stable", verify.stable);
  s_verify->add_flag("--popular", verify.popular);
  s_verify->add_flag("--dominant", verify.dominant);
  s_verify->add_flag("--witness", verify.witness, "instance matching witness-file");
  s_verify->add_option("files", verify.files, "instance, matching[, witness]")->required();

  ElectionArgs election;
  auto* s_election = app.add_subcommand("election", "head-to-head election between two matchings");
  s_election->add_option("instance", election.instance)->required();
  s_election->add_option("first", election.first)->required();
  s_election->add_option("second", election.second)->required();

  ClassifyArgs classify;
  auto* s_classify = app.add_subcommand("classify", "decide whether every popular matching is stable/dominant");
  s_classify->add_option("instance", classify.instance)->required();
  s_classify->add_flag("--all-popular-stable", classify.all_stable);
  s_classify->add_flag("--all-popular-dominant", classify.all_dominant);
  s_classify->add_flag("--exhaustive", classify.exhaustive, "decide by enumeration (size-capped)");
  s_classify->add_flag("--pairwise", classify.pairwise, "use the pairwise variant");
  s_classify->add_option("--cap", classify.cap, "vertex cap for --exhaustive")->check(CLI::PositiveNumber);
  s_classify->add_flag("--json", classify.json);

  ReduceArgs reduce;
  auto* s_reduce = app.add_subcommand("reduce", "compile a CNF formula into a gadget instance");
  s_reduce->add_option("cnf", reduce.cnf)->required();
  s_reduce->add_option("--target", reduce.target, "g4|g4max|g5|hmin|hroom")->required();
  s_reduce->add_flag("--verify", reduce.verify, "check the equivalence on this formula");
  s_reduce->add_option("-o,--output", reduce.output, "instance path; the gadget map goes to <path>.map");
  s_reduce->add_option("--limit", reduce.limit, "enumeration limit for --verify")->check(CLI::PositiveNumber);

  OracleArgs oracle;
  auto* s_oracle = app.add_subcommand("oracle", "exhaustive classification of every matching");
  s_oracle->add_option("instance", oracle.instance)->required();
  s_oracle->add_flag("--json", oracle.json);

  CorpusArgs corpus;
  auto* s_corpus = app.add_subcommand("corpus", "generate seeded instances");
  s_corpus->add_flag("--random", corpus.random);
  s_corpus->add_flag("--check", corpus.check, "compare the fast tests with the oracle on each instance");
  s_corpus->add_flag("--json", corpus.json);
  s_corpus->add_option("--out", corpus.out_dir, "write one file per instance here");
  s_corpus->add_option("params", corpus.params, "n=<k> count=<c> seed=<s> [density=<p>] [kind=<k>]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kYes;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  try {
    if (s_solve->parsed()) return cmd_solve(solve, out);
    if (s_verify->parsed()) return cmd_verify(verify, out);
    if (s_election->parsed()) return cmd_election(election, out);
    if (s_classify->parsed()) return cmd_classify(classify, out);
    if (s_reduce->parsed()) return cmd_reduce(reduce, out);
    if (s_oracle->parsed()) return cmd_oracle(oracle, out);
    if (s_corpus->parsed()) return cmd_corpus(corpus, out);
  } catch (const ParseError& e) {
    err << "parse error";
    if (e.line()) err << " at " << e.line() << ':' << e.column();
    err << ": " << e.what() << '\n';
    return kError;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace popmatch::cli
