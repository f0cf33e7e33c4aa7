// greedynet command-line tool.
//
//   greedynet generate  --kind uniform --n 20 --seed 7 -o points.json
//   greedynet construct --input points.json --method approx-ne -o graph.json --trace trace.jsonl
//   greedynet verify    --input points.json --graph graph.json --criterion additive:2 --expect-stable
//   greedynet dynamics  --input points.json --variant directed --schedule random:3 -o trace.jsonl
//   greedynet poa       --input points.json --graph graph.json
//   greedynet export    --input points.json --graph graph.json --format svg -o graph.svg
//   greedynet oracle    brute-so --input points.json --variant undirected

#include <iostream>

#include <CLI11.hpp>

#include "greedynet/greedynet.hpp"

namespace gn = greedynet;
using gn::io::Json;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    gn::io::write_file(path, text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

gn::MetricSpace load_input(const std::string& path) {
  if (path.empty()) throw Usage("--input is required");
  return gn::io::load_space(path);
}

gn::Network load_graph(const std::string& path, const gn::MetricSpace& space) {
  if (path.empty()) throw Usage("--graph is required");
  auto net = gn::io::network_from_json(gn::io::parse_json(gn::io::read_file(path), path));
  if (net.size() != space.size()) throw gn::InvalidInput("graph size does not match the input space");
  return net;
}

gn::StrategyProfile load_profile(const std::string& path, const gn::MetricSpace& space) {
  auto net = load_graph(path, space);
  if (!net.has_full_ownership() && net.edge_count() > 0)
    throw gn::InvalidInput("'" + path + "' has no edge ownership; a strategy profile is required");
  return net.edge_count() == 0 ? gn::StrategyProfile(net.variant(), net.size()) : net.to_profile();
}

std::vector<std::int64_t> parse_positions(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw gn::InvalidInput("bad position '" + item + "'");
    }
  }
  return out;
}

// Sets as "0,1;1,2" over element indices.
std::vector<std::vector<std::size_t>> parse_family(const std::string& text) {
  std::vector<std::vector<std::size_t>> family;
  std::stringstream ss(text);
  std::string set;
  while (std::getline(ss, set, ';')) {
    std::vector<std::size_t> s;
    for (auto v : parse_positions(set)) {
      if (v < 0) throw gn::InvalidInput("set elements must be non-negative");
      s.push_back(static_cast<std::size_t>(v));
    }
    family.push_back(std::move(s));
  }
  return family;
}

gn::StrategyProfile initial_profile(const std::string& spec, const gn::MetricSpace& space, gn::Variant variant,
                                    std::uint64_t seed) {
  if (spec == "empty") return gn::empty_profile(variant, space.size());
  if (spec == "complete") return gn::complete_profile(variant, space.size());
  if (spec.rfind("random:", 0) == 0) {
    auto p = gn::parse_rational(spec.substr(7));
    return gn::random_profile(variant, space.size(), p.convert_to<double>(), seed);
  }
  auto prof = load_profile(spec, space);
  if (prof.variant() != variant) throw gn::InvalidInput("initial profile variant does not match --variant");
  return prof;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy routing network creation games"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  bool error_json = false;
  app.add_option("--seed", seed, "Seed for every random choice");
  app.add_flag("--error-json", error_json, "Report errors as JSON on stderr");

  std::string input, graph, output, trace_out;

  auto* generate = app.add_subcommand("generate", "Generate an instance");
  std::string kind = "uniform", positions, family, spec_file, background_out, variant_name = "undirected";
  gn::InstanceSpec spec;
  std::int64_t max_weight = 20;
  generate->add_option("--kind", kind, "uniform|clustered|line|grid|gadget|poa-family|metric|cycle");
  generate->add_option("--spec", spec_file, "Instance spec JSON (overrides the flags)");
  generate->add_option("--n", spec.n, "Number of points (gadget: number of elements)");
  generate->add_option("--dimension", spec.dimension);
  generate->add_option("--side", spec.side, "Coordinates are drawn from [0, side)");
  generate->add_option("--clusters", spec.clusters);
  generate->add_option("--spread", spec.spread);
  generate->add_option("--positions", positions, "Line positions, comma separated");
  generate->add_option("--sets", spec.sets, "Gadget: number of sets");
  generate->add_option("--family", family, "Gadget: sets as 0,1;1,2");
  generate->add_option("--replicas", spec.replicas);
  generate->add_option("--scale", spec.scale, "Decimal places of the coordinates");
  generate->add_option("--max-weight", max_weight, "metric: largest random edge weight");
  generate->add_option("--variant", variant_name, "Variant of the emitted background profile");
  generate->add_option("--profile", background_out, "Where to write the background or initial profile");
  generate->add_option("-o,--output", output);

  auto* construct = app.add_subcommand("construct", "Build a network");
  std::string method, mode;
  construct->add_option("--input", input)->required();
  construct->add_option("--method", method, "directed-optimum|approx-ne|delaunay|nng")->required();
  construct->add_option("--mode", mode, "approx-ne: general|euclidean|planar2d");
  construct->add_option("--variant", variant_name, "nng: directed|undirected");
  construct->add_option("-o,--output", output);
  construct->add_option("--trace", trace_out, "approx-ne: JSON-lines iteration trace");

  auto* verify = app.add_subcommand("verify", "Check a profile for stability");
  std::string criterion = "ne";
  bool expect_stable = false;
  verify->add_option("--input", input)->required();
  verify->add_option("--graph", graph)->required();
  verify->add_option("--criterion", criterion, "ne|beta:<x>|additive:<k>");
  verify->add_flag("--expect-stable", expect_stable, "Exit with 2 when the verdict is NotStable");
  verify->add_option("-o,--output", output);

  auto* dynamics = app.add_subcommand("dynamics", "Run best-response dynamics");
  std::string schedule = "round-robin", initial = "empty";
  std::size_t max_rounds = 1000;
  dynamics->add_option("--input", input)->required();
  dynamics->add_option("--variant", variant_name);
  dynamics->add_option("--schedule", schedule, "round-robin|random:<seed>|scripted:<a,b,...>");
  dynamics->add_option("--initial", initial, "empty|complete|random:<p>|<profile file>");
  dynamics->add_option("--max-rounds", max_rounds);
  dynamics->add_option("-o,--output", output, "JSON-lines trace");
  dynamics->add_option("--final", background_out, "Final profile");

  auto* poa = app.add_subcommand("poa", "Price-of-anarchy report");
  bool no_exact = false;
  poa->add_option("--input", input)->required();
  poa->add_option("--graph", graph)->required();
  poa->add_flag("--no-exact", no_exact, "Skip the brute-force optimum");
  poa->add_option("-o,--output", output);

  auto* exporter = app.add_subcommand("export", "Render a network");
  std::string format = "json";
  exporter->add_option("--input", input)->required();
  exporter->add_option("--graph", graph, "Graph file; the nearest neighbor graph when omitted");
  exporter->add_option("--format", format, "dot|json|svg");
  exporter->add_option("-o,--output", output);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive reference computations");
  std::string oracle_name;
  std::size_t max_n = 0;
  oracle->add_option("name", oracle_name, "brute-so|brute-reach")->required();
  oracle->add_option("--input", input)->required();
  oracle->add_option("--graph", graph, "brute-reach: network to test");
  oracle->add_option("--variant", variant_name, "brute-so: directed|undirected");
  oracle->add_option("--max-n", max_n, "Size cap");
  oracle->add_option("-o,--output", output);

  auto fail = [&](const std::string& type, const std::string& message) {
    if (error_json) {
      Json j;
      j["error"] = type;
      j["message"] = message;
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << "greedynet: " << message << "\n";
    }
    return 1;
  };

  // parse errors happen before the flag is bound
  for (int i = 1; i < argc; ++i)
    if (std::string_view(argv[i]) == "--error-json") error_json = true;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*generate) {
      gn::Variant variant = gn::parse_variant(variant_name);
      if (!spec_file.empty()) {
        spec = gn::io::instance_spec_from_json(gn::io::parse_json(gn::io::read_file(spec_file), spec_file));
      } else if (kind == "metric") {
        emit(output, dump(gn::io::space_to_json(gn::random_general_metric(spec.n, max_weight, seed))));
        return 0;
      } else if (kind == "cycle") {
        auto c = gn::best_response_cycle_instance();
        emit(output, dump(gn::io::space_to_json(c.space)));
        if (!background_out.empty()) gn::io::write_file(background_out, dump(gn::io::profile_to_json(c.initial)));
        return 0;
      } else {
        spec.kind = gn::parse_instance_kind(kind);
        spec.seed = seed;
        if (!positions.empty()) spec.positions = parse_positions(positions);
        if (!family.empty()) spec.family = parse_family(family);
      }
      auto inst = gn::generate_instance(spec, variant);
      emit(output, dump(gn::io::space_to_json(inst.space)));
      if (!background_out.empty() && inst.background)
        gn::io::write_file(background_out, dump(gn::io::profile_to_json(*inst.background)));
      return 0;
    }

    if (*construct) {
      auto space = load_input(input);
      if (method == "directed-optimum") {
        auto r = gn::construct_directed_optimum(space);
        if (!r.certified) std::cerr << "warning: heuristic routing sets; result is not certified\n";
        emit(output, dump(gn::io::profile_to_json(r.profile)));
      } else if (method == "approx-ne") {
        auto m = mode.empty() ? gn::default_approx_mode(space) : gn::parse_approx_mode(mode);
        auto r = gn::compute_approximate_ne(space, m);
        if (!r.certified()) std::cerr << "warning: construction fell back to a relaxed orientation\n";
        emit(output, dump(gn::io::profile_to_json(r.profile)));
        if (!trace_out.empty()) gn::io::write_file(trace_out, gn::io::algorithm_trace_to_jsonl(r.trace));
      } else if (method == "delaunay") {
        emit(output, dump(gn::io::network_to_json(gn::delaunay_2d(space).network())));
      } else if (method == "nng") {
        emit(output, dump(gn::io::network_to_json(gn::build_nng(space).network(gn::parse_variant(variant_name)))));
      } else {
        throw Usage("unknown method '" + method + "'");
      }
      return 0;
    }

    if (*verify) {
      auto space = load_input(input);
      auto profile = load_profile(graph, space);
      auto report = gn::verify_equilibrium(space, profile, gn::parse_criterion(criterion));
      emit(output, dump(gn::io::equilibrium_report_to_json(report)));
      if (!output.empty() && output != "-") std::cout << gn::to_string(report.verdict) << "\n";
      if (expect_stable && report.verdict == gn::Verdict::NotStable) return 2;
      return 0;
    }

    if (*dynamics) {
      auto space = load_input(input);
      gn::Variant variant = gn::parse_variant(variant_name);
      auto start = initial_profile(initial, space, variant, seed);
      gn::DynamicsOptions opts;
      opts.max_rounds = max_rounds;
      auto t = gn::run_dynamics(space, start, gn::parse_schedule(schedule), opts);
      emit(output, gn::io::dynamics_trace_to_jsonl(t));
      if (!background_out.empty()) gn::io::write_file(background_out, dump(gn::io::profile_to_json(t.final_profile)));
      if (!output.empty() && output != "-") std::cout << gn::to_string(t.status) << " after " << t.moves() << " moves\n";
      return 0;
    }

    if (*poa) {
      auto space = load_input(input);
      gn::PoaOptions opts;
      opts.compute_exact = !no_exact;
      auto r = gn::poa_report(space, load_profile(graph, space), opts);
      emit(output, dump(gn::io::poa_report_to_json(r)));
      return 0;
    }

    if (*exporter) {
      auto space = load_input(input);
      auto net = graph.empty() ? gn::build_nng(space).network(gn::Variant::Undirected) : load_graph(graph, space);
      if (format == "json") {
        emit(output, dump(gn::io::network_to_json(net)));
      } else if (format == "dot") {
        emit(output, gn::io::to_dot(net, space));
      } else if (format == "svg") {
        std::vector<std::string> warnings;
        emit(output, gn::io::to_svg(net, space, {}, &warnings));
        for (auto& w : warnings) std::cerr << "warning: " << w << "\n";
      } else {
        throw Usage("unknown format '" + format + "'");
      }
      return 0;
    }

    if (*oracle) {
      auto space = load_input(input);
      if (oracle_name == "brute-so") {
        gn::Variant variant = gn::parse_variant(variant_name);
        std::size_t cap = max_n ? max_n : (variant == gn::Variant::Directed ? gn::kMaxBruteDirected : gn::kMaxBruteUndirected);
        emit(output, dump(gn::io::social_optimum_to_json(gn::brute_force_social_optimum(space, variant, cap))));
      } else if (oracle_name == "brute-reach") {
        std::size_t cap = max_n ? max_n : 10;
        if (space.size() > cap) throw gn::Unsupported("brute-reach is capped at n=" + std::to_string(cap));
        auto net = load_graph(graph, space);
        Json reach = Json::object();
        bool navigable = true;
        for (gn::Agent t = 0; t < space.size(); ++t) {
          auto r = gn::enumerate_reachable_to(net, space, t);
          std::vector<gn::Agent> members;
          for (gn::Agent x = 0; x < space.size(); ++x)
            if (r.test(x)) members.push_back(x);
          if (members.size() + 1 != space.size()) navigable = false;
          reach[std::to_string(t)] = members;
        }
        Json j;
        j["reachable_to"] = std::move(reach);
        j["navigable"] = navigable;
        emit(output, dump(j));
      } else {
        throw Usage("unknown oracle '" + oracle_name + "'");
      }
      return 0;
    }
  } catch (const Usage& e) {
    return fail("usage", e.what());
  } catch (const gn::InvalidInput& e) {
    return fail("invalid_input", e.what());
  } catch (const gn::Unsupported& e) {
    return fail("unsupported", e.what());
  } catch (const gn::Error& e) {
    return fail("error", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
