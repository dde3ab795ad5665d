#include "apfree/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "apfree/errors.hpp"
#include "apfree/json_io.hpp"

namespace apfree {

namespace {

using json = nlohmann::json;
namespace jio = json_io;

// Malformed command-line or document input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string read_stream(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// An argument is inline JSON, "-" for stdin, or a path to a JSON file.
json load_json(const std::string& arg, std::istream& in) {
  if (arg == "-") return json::parse(read_stream(in));
  auto inline_doc = json::parse(arg, nullptr, false);
  if (!inline_doc.is_discarded()) return inline_doc;
  std::ifstream file(arg);
  if (!file) throw InputError("'" + arg + "' is neither JSON nor a readable file");
  return json::parse(read_stream(file));
}

json load_or_stdin(const std::optional<std::string>& arg, std::istream& in) {
  return load_json(arg.value_or("-"), in);
}

// Temp file in the target directory, then rename.
void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp + "'");
    f << text;
    if (!f.flush()) throw std::runtime_error("cannot write '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

void emit(const std::optional<std::string>& out_path, std::ostream& out, const json& doc) {
  const std::string text = jio::dump(doc);
  if (out_path) {
    write_atomically(*out_path, text);
  } else {
    out << text;
  }
}

NDGenerator load_generator(const json& j) {
  if (j.is_array()) {
    auto gens = jio::parse_generators(j);
    return nested_union(gens, gens.size());
  }
  return jio::parse_generator(j);
}

std::vector<Rat> parse_schedule(const std::string& text) {
  std::vector<Rat> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(Rat::parse(item));
  }
  return out;
}

std::string decimal(const Rat& r) {
  std::ostringstream ss;
  ss << std::setprecision(17) << r.to_double();
  return ss.str();
}

struct RunConfig {
  std::vector<NDGenerator> generators;
  json generator_doc;
  int stages = 6;
  std::vector<Rat> eps_schedule;
  int max_gen = 64;
  std::uint64_t seed = 0;
  std::optional<Rat> min_eps;
  std::optional<std::string> output;
};

void apply_config_file(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  if (j.contains("generators")) {
    cfg.generator_doc = j.at("generators");
    cfg.generators = jio::parse_generators(cfg.generator_doc);
  }
  if (j.contains("stages")) cfg.stages = j.at("stages").get<int>();
  if (j.contains("eps_schedule")) {
    cfg.eps_schedule.clear();
    for (const auto& e : j.at("eps_schedule")) cfg.eps_schedule.push_back(jio::parse_rat(e));
  }
  if (j.contains("max_gen")) cfg.max_gen = j.at("max_gen").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("min_eps")) cfg.min_eps = jio::parse_rat(j.at("min_eps"));
  if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
}

void validate(const RunConfig& cfg) {
  if (cfg.generators.empty()) throw InputError("build: no generators given (use --sets or a config file)");
  if (cfg.stages < 1) throw InputError("build: stages must be >= 1");
  if (cfg.max_gen < 1) throw InputError("build: max_gen must be >= 1");
  if (!cfg.eps_schedule.empty() && cfg.eps_schedule.size() != static_cast<std::size_t>(cfg.stages)) {
    throw InputError("build: eps schedule needs one entry per stage");
  }
  for (const auto& e : cfg.eps_schedule) {
    if (e.sign() <= 0 || e >= Rat(1, 2)) throw InputError("build: schedule entry " + e.str() + " not in (0, 1/2)");
  }
}

int error_exit(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact constructions of AP-free images of nowhere-dense sets"};
  app.require_subcommand(1);

  int exit_code = kExitOk;

  // gen-set
  auto* gen_set = app.add_subcommand("gen-set", "Emit the cover of a generator at a generation");
  std::string gs_gen;
  int gs_generation = 0;
  std::optional<std::string> gs_homeo, gs_out;
  gen_set->add_option("--gen", gs_gen, "Generator descriptor (JSON, file, or -)")->required();
  gen_set->add_option("--generation,-g", gs_generation, "Cover generation")->check(CLI::NonNegativeNumber);
  gen_set->add_option("--homeo", gs_homeo, "Emit the image under this homeomorphism instead");
  gen_set->add_option("--out,-o", gs_out, "Output path");
  gen_set->callback([&] {
    NDGenerator g = load_generator(load_json(gs_gen, in));
    IntervalUnion cover = g.cover(gs_generation);
    if (gs_homeo) cover = image(jio::parse_homeo(load_json(*gs_homeo, in)), cover);
    emit(gs_out, out, jio::to_json(cover));
  });

  // destroy
  auto* destroy = app.add_subcommand("destroy", "One AP-destruction step");
  std::string ds_gen, ds_eps;
  int ds_max_gen = 64;
  std::optional<std::string> ds_homeo, ds_out;
  bool ds_all_cells = false;
  destroy->add_option("--gen,--sets", ds_gen, "Generator descriptor or list (JSON, file, or -)")->required();
  destroy->add_option("--eps", ds_eps, "Step threshold in (0, 1/2)")->required();
  destroy->add_option("--max-gen", ds_max_gen, "Generation limit");
  destroy->add_option("--homeo", ds_homeo, "Starting homeomorphism (default identity)");
  destroy->add_flag("--anchor-empty-cells", ds_all_cells, "Anchor every partition piece");
  destroy->add_option("--out,-o", ds_out, "Output path");
  destroy->callback([&] {
    NDGenerator g = load_generator(load_json(ds_gen, in));
    PLHomeo f = ds_homeo ? jio::parse_homeo(load_json(*ds_homeo, in)) : PLHomeo();
    DestroyResult res = destroy_step(f, g, Rat::parse(ds_eps), ds_max_gen, DestroyOptions{ds_all_cells});
    emit(ds_out, out, json{{"homeo", jio::to_json(res.homeo)},
                           {"plan", jio::to_json(res.plan)},
                           {"stage", jio::to_json(res.stage)}});
  });

  // build
  auto* build = app.add_subcommand("build", "Multi-stage construction; writes a certificate");
  std::optional<std::string> b_config, b_sets, b_schedule, b_min_eps, b_out;
  std::optional<int> b_stages, b_max_gen;
  std::optional<std::uint64_t> b_seed;
  build->add_option("--config", b_config, "RunConfig JSON file");
  build->add_option("--sets", b_sets, "Generator list (JSON, file, or -)");
  build->add_option("--stages", b_stages, "Number of stages");
  build->add_option("--eps-schedule", b_schedule, "Comma-separated requested steps, one per stage");
  build->add_option("--max-gen", b_max_gen, "Generation limit");
  build->add_option("--seed", b_seed, "Seed recorded in the certificate");
  build->add_option("--min-eps", b_min_eps, "Smallest admissible stage step");
  build->add_option("--out,-o", b_out, "Certificate path (default stdout)");
  build->callback([&] {
    RunConfig cfg;
    if (b_config) apply_config_file(cfg, load_json(*b_config, in));
    if (b_sets) {
      cfg.generator_doc = load_json(*b_sets, in);
      cfg.generators = jio::parse_generators(cfg.generator_doc);
    }
    if (b_stages) cfg.stages = *b_stages;
    if (b_schedule) cfg.eps_schedule = parse_schedule(*b_schedule);
    if (b_max_gen) cfg.max_gen = *b_max_gen;
    if (b_seed) cfg.seed = *b_seed;
    if (b_min_eps) cfg.min_eps = Rat::parse(*b_min_eps);
    if (b_out) cfg.output = *b_out;
    validate(cfg);
    BuildOptions opts;
    opts.seed = cfg.seed;
    if (cfg.min_eps) opts.min_eps = *cfg.min_eps;
    FapCertificate cert = build_fap(cfg.generators, cfg.stages, cfg.eps_schedule, cfg.max_gen, opts);
    emit(cfg.output, out, jio::to_json(cert));
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Replay a certificate; exit 0 iff valid");
  std::string v_cert, v_sets;
  verify->add_option("certificate", v_cert, "Certificate (JSON, file, or -)")->required();
  verify->add_option("--sets", v_sets, "Generator list the certificate was built for")->required();
  verify->callback([&] {
    FapCertificate cert = jio::parse_certificate(load_json(v_cert, in));
    std::vector<NDGenerator> gens = jio::parse_generators(load_json(v_sets, in));
    VerifyReport rep = verify_certificate(cert, gens);
    json doc{{"valid", rep.ok}};
    if (!rep.ok) {
      doc["check"] = rep.check;
      doc["detail"] = rep.detail;
    }
    out << jio::dump(doc);
    if (!rep.ok) exit_code = kExitVerificationFailed;
  });

  // ap3
  auto* ap3 = app.add_subcommand("ap3", "Decide 3-term AP existence above a step threshold");
  std::optional<std::string> a_set;
  std::string a_eps;
  bool a_strict = false;
  ap3->add_option("--set", a_set, "Interval union (JSON, file, or -; default stdin)");
  ap3->add_option("--eps", a_eps, "Step threshold")->required();
  ap3->add_flag("--strict", a_strict, "Require step > eps instead of >= eps");
  ap3->callback([&] {
    IntervalUnion u = jio::parse_union(load_or_stdin(a_set, in));
    auto w = has_ap3(u, Rat::parse(a_eps), a_strict);
    out << jio::dump(json{{"witness", w ? jio::to_json(*w) : json(nullptr)}});
  });

  // defect
  auto* defect_cmd = app.add_subcommand("defect", "Minimum defect and stability radius");
  std::optional<std::string> d_set;
  std::string d_eps;
  defect_cmd->add_option("--set", d_set, "Interval union (JSON, file, or -; default stdin)");
  defect_cmd->add_option("--eps", d_eps, "Gap threshold")->required();
  defect_cmd->callback([&] {
    IntervalUnion u = jio::parse_union(load_or_stdin(d_set, in));
    Stability st = stability(u, Rat::parse(d_eps));
    json doc{{"delta", st.delta.str()}, {"vacuous", !st.defect.has_value()}};
    if (st.defect) {
      doc["gamma"] = st.defect->gamma.str();
      doc["achiever"] = jio::to_json(*st.defect)["achiever"];
    } else {
      doc["gamma"] = nullptr;
    }
    out << jio::dump(doc);
  });

  // witness
  auto* witness = app.add_subcommand("witness", "Long AP inside a positive-length component");
  std::optional<std::string> w_set;
  int w_n = 3;
  witness->add_option("--set", w_set, "Interval union (JSON, file, or -; default stdin)");
  witness->add_option("--n", w_n, "AP length")->required();
  witness->callback([&] {
    IntervalUnion u = jio::parse_union(load_or_stdin(w_set, in));
    auto w = ap_witness_long(u, w_n);
    out << jio::dump(json{{"witness", w ? jio::to_json(*w) : json(nullptr)}});
  });

  // dist
  auto* dist = app.add_subcommand("dist", "Sup-norm distance of two homeomorphisms");
  std::string di_phi, di_psi;
  dist->add_option("--phi", di_phi, "Homeomorphism (JSON, file, or -)")->required();
  dist->add_option("--psi", di_psi, "Homeomorphism (JSON, file, or -)")->required();
  dist->callback([&] {
    Rat d = sup_dist(jio::parse_homeo(load_json(di_phi, in)), jio::parse_homeo(load_json(di_psi, in)));
    out << jio::dump(json{{"sup_dist", d.str()}});
  });

  // compose
  auto* compose_cmd = app.add_subcommand("compose", "outer ∘ inner");
  std::string c_outer, c_inner;
  compose_cmd->add_option("--outer", c_outer, "Homeomorphism (JSON, file, or -)")->required();
  compose_cmd->add_option("--inner", c_inner, "Homeomorphism (JSON, file, or -)")->required();
  compose_cmd->callback([&] {
    PLHomeo h = compose(jio::parse_homeo(load_json(c_outer, in)), jio::parse_homeo(load_json(c_inner, in)));
    out << jio::dump(jio::to_json(h));
  });

  // rap-witness
  auto* rap = app.add_subcommand("rap-witness", "Long AP in the image of a positive-measure union");
  std::optional<std::string> r_set, r_homeo;
  int r_n = 3;
  rap->add_option("--set", r_set, "Interval union (JSON, file, or -; default stdin)");
  rap->add_option("--homeo", r_homeo, "Homeomorphism (default identity)");
  rap->add_option("--n", r_n, "AP length")->required();
  rap->callback([&] {
    IntervalUnion u = jio::parse_union(load_or_stdin(r_set, in));
    PLHomeo phi = r_homeo ? jio::parse_homeo(load_json(*r_homeo, in)) : PLHomeo();
    out << jio::dump(json{{"witness", jio::to_json(rap_demo(u, phi, r_n))}});
  });

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "CSV (x,y,kind) of a homeomorphism graph; lossy");
  std::string p_homeo;
  std::optional<std::string> p_gen, p_out;
  int p_generation = 0, p_samples = 0;
  plot->add_option("--homeo", p_homeo, "Homeomorphism (JSON, file, or -)")->required();
  plot->add_option("--gen", p_gen, "Generator whose cover rectangles to include");
  plot->add_option("--generation,-g", p_generation, "Cover generation")->check(CLI::NonNegativeNumber);
  plot->add_option("--samples", p_samples, "Extra uniform samples of the graph")->check(CLI::NonNegativeNumber);
  plot->add_option("--out,-o", p_out, "Output path");
  plot->callback([&] {
    PLHomeo phi = jio::parse_homeo(load_json(p_homeo, in));
    std::ostringstream csv;
    csv << "x,y,kind\n";
    for (const auto& b : phi.breakpoints()) csv << decimal(b.x) << "," << decimal(b.y) << ",breakpoint\n";
    for (int i = 0; i <= p_samples && p_samples > 0; ++i) {
      Rat x(i, p_samples);
      csv << decimal(x) << "," << decimal(phi.eval(x)) << ",sample\n";
    }
    if (p_gen) {
      NDGenerator g = load_generator(load_json(*p_gen, in));
      for (const auto& c : g.cover(p_generation).components()) {
        csv << decimal(c.lo()) << "," << decimal(phi.eval(c.lo())) << ",cover_lo\n";
        csv << decimal(c.hi()) << "," << decimal(phi.eval(c.hi())) << ",cover_hi\n";
      }
    }
    if (p_out) {
      write_atomically(*p_out, csv.str());
    } else {
      out << csv.str();
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return error_exit(err, kExitMalformedInput, "usage", e.what());
  } catch (const RefinementExhausted& e) {
    return error_exit(err, kExitRefinementExhausted, "refinement_exhausted", e.what());
  } catch (const ScheduleInfeasible& e) {
    return error_exit(err, kExitRefinementExhausted, "schedule_infeasible", e.what());
  } catch (const VerificationFailed& e) {
    return error_exit(err, kExitVerificationFailed, "verification_failed", e.what());
  } catch (const json::exception& e) {
    return error_exit(err, kExitMalformedInput, "malformed_input", e.what());
  } catch (const std::invalid_argument& e) {
    return error_exit(err, kExitMalformedInput, "malformed_input", e.what());
  } catch (const std::domain_error& e) {
    return error_exit(err, kExitMalformedInput, "precondition", e.what());
  } catch (const std::exception& e) {
    return error_exit(err, kExitVerificationFailed, "internal", e.what());
  }
  return exit_code;
}

}  // namespace apfree
