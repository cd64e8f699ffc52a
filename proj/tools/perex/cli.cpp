#include "perex/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "perex/bs.hpp"
#include "perex/equations.hpp"
#include "perex/fsa.hpp"
#include "perex/graph_product.hpp"
#include "perex/monoids.hpp"
#include "perex/trace_pump.hpp"
#include "perex/traces.hpp"
#include "perex/words.hpp"

namespace perex::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxRenderedLetters = 4096;

template <class T>
T field(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::string trace_word(const json& j, const char* key) {
  const auto s = field<std::string>(j, key, "");
  return s == "1" ? std::string{} : s;
}

json task_exp(const json& in, json& norm) {
  if (in.contains("runs")) {
    std::vector<Run> runs;
    for (const auto& r : in.at("runs")) {
      const auto letter = r.at(0).get<std::string>();
      if (letter.size() != 1) throw std::invalid_argument("runs: letters must be single characters");
      runs.push_back(Run{letter[0], r.at(1).get<std::uint64_t>()});
    }
    norm["runs"] = in.at("runs");
    return {{"exp", exponent_of_periodicity_rle(runs)}};
  }
  const auto w = in.at("word").get<std::string>();
  norm["word"] = w;
  return {{"exp", exponent_of_periodicity(std::string_view(w))}, {"length", w.size()}};
}

json task_lexnf(const json& in, json& norm) {
  const IndepAlphabet alph = alphabet_from_json(in.at("alphabet"));
  const auto w = in.at("word").get<std::string>();
  alph.check_word(w);
  norm["alphabet"] = alphabet_to_json(alph);
  norm["word"] = w;
  const Word nf = lex_nf(w, alph);
  return {{"nf", nf}, {"is_lex_nf", is_lex_nf(w, alph)}};
}

json task_trace_pump(const json& in, json& norm, const Options& opt) {
  auto alph = std::make_shared<const IndepAlphabet>(alphabet_from_json(in.at("alphabet")));
  const std::size_t n_max = opt.n_max.value_or(field<std::size_t>(in, "n_max", 6));
  const auto u = trace_word(in, "u");
  const auto p = trace_word(in, "p");
  const auto v = trace_word(in, "v");
  norm["alphabet"] = alphabet_to_json(*alph);
  norm["u"] = u;
  norm["p"] = p;
  norm["v"] = v;
  norm["n_max"] = n_max;
  const auto cert = certify_pumping_family(Trace(alph, u), Trace(alph, p), Trace(alph, v), n_max);
  json r = certificate_to_json(cert);
  r["ok"] = cert.ok();
  return r;
}

json task_pp_check(const json& in, json& norm, const Options& opt) {
  const Dfa a = dfa_from_json(in.at("dfa"));
  const std::size_t n_max = opt.n_max.value_or(field<std::size_t>(in, "n_max", 3));
  norm["dfa"] = dfa_to_json(a);
  norm["n_max"] = n_max;
  json r;
  r["infinite"] = is_infinite(a);
  r["perfect"] = is_periodically_perfect(a);
  if (r["infinite"].get<bool>()) {
    const auto t = pump_triple(a);
    r["pump_triple"] = {{"u", t.u}, {"p", t.p}, {"v", t.v}};
  }
  if (r["perfect"].get<bool>()) {
    json bounds = json::array();
    for (std::size_t n = 1; n <= n_max; ++n) bounds.push_back({{"n", n}, {"bound", perfectness_bound(a, n)}});
    r["bounds"] = std::move(bounds);
  } else if (auto w = two_cycle_witness(a)) {
    r["two_cycle_witness"] = {{"r", w->r}, {"u", w->u}, {"v", w->v}, {"s", w->s}};
  }
  return r;
}

std::shared_ptr<const GPSpec> gp_spec(const json& in, json& norm) {
  auto spec = std::make_shared<const GPSpec>(gp_spec_from_json(in.at("graph_product")));
  norm["graph_product"] = gp_spec_to_json(*spec);
  return spec;
}

GPElement gp_element(const GPSpec& spec, const json& in, const char* key, json& norm) {
  const GPElement x = gp_from_json(spec, in.at(key));
  norm[key] = gp_to_json(spec, x);
  return x;
}

json gp_element_report(const GPSpec& spec, const GPElement& x) {
  const GPWord w = nf_global(spec, x);
  return {{"nf", render(spec, w)}, {"syllables", gp_to_json(spec, x)}, {"length", w.size()}};
}

json task_gp_nf(const json& in, json& norm) {
  const auto spec = gp_spec(in, norm);
  const GPElement x = gp_element(*spec, in, "element", norm);
  const GPWord g = nf_global(*spec, x);
  std::vector<std::size_t> letters;
  for (const auto& l : g) letters.push_back(l.color * 1024 + static_cast<std::size_t>(l.gen));
  return {{"nf_gamma", render(*spec, nf_gamma(*spec, x))},
          {"nf_global", render(*spec, g)},
          {"syllables", gp_to_json(*spec, x)},
          {"exp", exponent_of_periodicity(letters)}};
}

json task_gp_pump(const json& in, json& norm, const Options& opt) {
  const auto spec = gp_spec(in, norm);
  const GPElement u = gp_element(*spec, in, "u", norm);
  const GPElement p = gp_element(*spec, in, "p", norm);
  const GPElement v = gp_element(*spec, in, "v", norm);
  const std::size_t n_max = opt.n_max.value_or(field<std::size_t>(in, "n_max", 20));
  norm["n_max"] = n_max;
  json fam = json::array();
  for (const auto& f : pump_family_nf(*spec, u, p, v, n_max)) {
    fam.push_back({{"n", f.n}, {"nf", render(*spec, f.word)}, {"exp", f.exp}});
  }
  return {{"family", std::move(fam)}};
}

json task_gp_sqrt(const json& in, json& norm) {
  const auto spec = gp_spec(in, norm);
  const GPElement w = gp_element(*spec, in, "element", norm);
  json roots = json::array();
  for (const auto& x : gp_square_roots(*spec, w)) roots.push_back(gp_element_report(*spec, x));
  return {{"count", roots.size()}, {"roots", std::move(roots)}};
}

json task_gp_torsion(const json& in, json& norm, const Options& opt) {
  const auto spec = gp_spec(in, norm);
  const GPElement y = gp_element(*spec, in, "element", norm);
  const std::size_t bound = opt.bound.value_or(field<std::size_t>(in, "bound", 60));
  norm["bound"] = bound;
  const MonoidOracle o = gp_oracle(spec);
  json profile;
  const auto pp = power_profile(o, gp_encode(y), bound);
  if (const auto* f = std::get_if<FinitePowers>(&pp)) {
    profile = {{"finite", true}, {"r", f->r}, {"p", f->p}};
  } else {
    profile = {{"finite", false}, {"bound", std::get<NoRepetitionWithin>(pp).bound}};
  }
  return {{"finite_power_submonoid", has_finite_power_submonoid(*spec, y)}, {"power_profile", std::move(profile)}};
}

BSSpec bs_spec(const json& in, json& norm) {
  const BSSpec spec(in.at("p").get<std::int64_t>(), in.at("q").get<std::int64_t>());
  norm["p"] = spec.p();
  norm["q"] = spec.q();
  return spec;
}

json bs_word_report(const BSWord& w) {
  json j{{"compact", to_compact(w)}, {"t_length", w.t_length()}};
  const std::size_t len = letter_length(w);
  j["letter_length"] = len;
  if (len <= kMaxRenderedLetters) j["letters"] = to_letters(w);
  return j;
}

json task_bs_nf(const json& in, json& norm, const Options& opt) {
  const BSSpec spec = bs_spec(in, norm);
  const auto word = in.at("word").get<std::string>();
  const auto seed = opt.seed.value_or(field<std::uint64_t>(in, "seed", 0));
  const auto samples = field<std::size_t>(in, "samples", 5);
  norm["word"] = word;
  norm["seed"] = seed;
  norm["samples"] = samples;
  const BSWord w = parse_bs_word(word);
  const BSWord nf = rewrite_s(spec, w);
  std::mt19937_64 rng(seed);
  bool agree = true;
  for (std::size_t i = 0; i < samples; ++i) agree = agree && rewrite_s_random(spec, w, rng) == nf;
  json r = bs_word_report(nf);
  r["britton"] = to_compact(britton_reduce(spec, w));
  r["random_orders_agree"] = agree;
  r["exp"] = exponent_of_periodicity_rle(to_runs(nf));
  return r;
}

json task_bs_sqrt(const json& in, json& norm, const Options& opt) {
  const BSSpec spec = bs_spec(in, norm);
  const auto word = in.at("word").get<std::string>();
  norm["word"] = word;
  const BSWord g = rewrite_s(spec, parse_bs_word(word));
  std::int64_t max_exp = std::abs(g.head);
  for (const auto& [e, n] : g.tail) max_exp = std::max(max_exp, std::abs(n));
  const auto t_bound = field<std::size_t>(in, "t_bound", g.t_length());
  const auto a_bound = static_cast<std::int64_t>(
      opt.bound.value_or(field<std::size_t>(in, "a_bound", static_cast<std::size_t>(std::max(std::abs(spec.q()), 2 * max_exp)))));
  norm["t_bound"] = t_bound;
  norm["a_bound"] = a_bound;
  json roots = json::array();
  for (const auto& x : square_roots_bounded(spec, g, t_bound, a_bound)) roots.push_back(bs_word_report(x));
  const bool fs = spec.p() >= 1 && spec.p() <= std::abs(spec.q()) ? has_fsqrt(spec.p(), spec.q()) : false;
  return {{"has_fsqrt", fs}, {"count", roots.size()}, {"roots", std::move(roots)}};
}

json task_bs_witness(const json& in, json& norm, const Options& opt) {
  const BSSpec spec = bs_spec(in, norm);
  const std::size_t n_max = opt.n_max.value_or(field<std::size_t>(in, "n_max", 8));
  norm["n_max"] = n_max;
  json ws = json::array();
  std::set<std::vector<int>> seqs;
  std::set<BSWord> roots;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto w = infinite_sqrt_witness(spec, n);
    const BSWord sq = rewrite_s(spec, bs_concat(w.x, w.x));
    const auto ts = t_sequence(w.x);
    seqs.insert(ts);
    roots.insert(rewrite_s(spec, w.x));
    ws.push_back({{"n", n},
                  {"x", to_compact(w.x)},
                  {"g", to_compact(w.g)},
                  {"square", to_compact(sq)},
                  {"square_matches", sq == rewrite_s(spec, w.g)},
                  {"t_sequence", ts}});
  }
  return {{"witnesses", std::move(ws)},
          {"distinct_roots", roots.size() == n_max},
          {"distinct_t_sequences", seqs.size() == n_max}};
}

json task_quad(const json& in, json& norm, const Options& opt, int& exit_code) {
  const QuadSystem sys = quad_system_from_json(in);
  const std::size_t budget = opt.bound.value_or(field<std::size_t>(in, "budget", 3));
  const json normalized = quad_system_to_json(sys);
  for (const auto& [k, v] : normalized.items()) norm[k] = v;
  norm["budget"] = budget;
  const Report r = analyze(sys, budget);
  if (r.verdict == Verdict::Inconclusive) exit_code = 2;
  return report_to_json(sys, r);
}

json error_report(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

Outcome run_task(const json& task, const Options& opt) {
  Outcome out;
  try {
    if (!task.is_object()) throw std::invalid_argument("task document must be a JSON object");
    const auto kind = task.at("task").get<std::string>();
    json norm{{"task", kind}};
    json r;
    if (kind == "exp") {
      r = task_exp(task, norm);
    } else if (kind == "lexnf") {
      r = task_lexnf(task, norm);
    } else if (kind == "trace-pump") {
      r = task_trace_pump(task, norm, opt);
    } else if (kind == "pp-check") {
      r = task_pp_check(task, norm, opt);
    } else if (kind == "gp-nf") {
      r = task_gp_nf(task, norm);
    } else if (kind == "gp-pump") {
      r = task_gp_pump(task, norm, opt);
    } else if (kind == "gp-sqrt") {
      r = task_gp_sqrt(task, norm);
    } else if (kind == "gp-torsion") {
      r = task_gp_torsion(task, norm, opt);
    } else if (kind == "bs-nf") {
      r = task_bs_nf(task, norm, opt);
    } else if (kind == "bs-sqrt") {
      r = task_bs_sqrt(task, norm, opt);
    } else if (kind == "bs-witness") {
      r = task_bs_witness(task, norm, opt);
    } else if (kind == "quad-analyze") {
      r = task_quad(task, norm, opt, out.exit_code);
    } else {
      throw std::invalid_argument("unknown task '" + kind + "'");
    }
    r["task"] = std::move(norm);
    out.report = std::move(r);
  } catch (const json::exception& e) {
    out = {1, error_report("schema", e.what())};
  } catch (const std::invalid_argument& e) {
    out = {1, error_report("input", e.what())};
  } catch (const std::domain_error& e) {
    out = {1, error_report("domain", e.what())};
  } catch (const std::exception& e) {
    out = {1, error_report("internal", e.what())};
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"perex: exponents of periodicity, traces, graph products, Baumslag-Solitar groups and quadratic equations"};
  std::string path;
  Options opt;
  app.add_option("task", path, "Task file (JSON), or - for standard input")->required();
  app.add_option("--out", opt.out, "Write the report to this path");
  app.add_option("--seed", opt.seed, "Seed for randomized checks");
  app.add_option("--bound", opt.bound, "Search budget");
  app.add_option("--n-max", opt.n_max, "Largest pumping exponent");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  Outcome out;
  try {
    std::string text;
    if (path == "-") {
      text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
      std::ifstream f(path);
      if (!f) throw std::invalid_argument("cannot read '" + path + "'");
      text.assign(std::istreambuf_iterator<char>(f), {});
    }
    out = run_task(json::parse(text), opt);
  } catch (const json::exception& e) {
    out = {1, error_report("schema", e.what())};
  } catch (const std::exception& e) {
    out = {1, error_report("input", e.what())};
  }
  const std::string doc = out.report.dump(2) + "\n";
  if (opt.out) {
    std::ofstream f(*opt.out);
    if (!f) {
      std::cerr << "cannot write '" << *opt.out << "'\n";
      return 1;
    }
    f << doc;
  } else {
    std::cout << doc;
  }
  return out.exit_code;
}

}  // namespace perex::cli
