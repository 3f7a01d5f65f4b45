// allee: command-line front end for the predator-prey analysis library.

#include "allee/allee.hpp"
#include "cli_support.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace allee;
using allee::cli::Resolver;
using allee::cli::usage_error;

namespace {

enum Exit { kOk = 0, kUsage = 1, kMath = 2, kVerify = 3 };

const char* kParamNames[] = {"alpha", "beta", "gamma", "delta", "eta"};

struct Common {
  std::optional<std::string> config_path;
  bool json = false;
  std::map<std::string, std::optional<std::string>> p;
  std::optional<Config> cfg;

  void add(CLI::App* app, bool with_params = true) {
    app->add_option("--config", config_path, "TOML file with [model], [solver], [output] sections");
    app->add_flag("--json", json, "machine-readable JSON output");
    if (with_params)
      for (const char* n : kParamNames) app->add_option(std::string("--") + n, p[n], std::string(n) + " as p/q");
  }

  void load() {
    if (config_path) cfg = Config::load(*config_path);
  }

  bool want_json() const { return Resolver(cfg).boolean("output", "json", json, false); }

  std::optional<Rational> param(const std::string& n, bool exact) const {
    auto it = p.find(n);
    std::optional<std::string> flag = it == p.end() ? std::nullopt : it->second;
    return Resolver(cfg).rational("model", n, flag, exact);
  }

  Rational need(const std::string& n, bool exact) const {
    auto v = param(n, exact);
    if (!v) throw usage_error("missing parameter --" + n);
    return *v;
  }

  Params<Rational> params(bool exact) const {
    return {need("alpha", exact), need("beta", exact), need("gamma", exact), need("delta", exact),
            need("eta", exact)};
  }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

// ---------------------------------------------------------------------------

struct ClassifyCmd {
  Common c;
  bool from_locus = false;

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("classify", "exact equilibria and their types");
    c.add(sc);
    sc->add_flag("--from-cusp-locus", from_locus, "derive alpha, beta, delta from gamma and eta on the cusp locus");
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    Params<Rational> p;
    if (from_locus) {
      p = cusp_locus(c.need("gamma", true), c.need("eta", true)).params();
    } else {
      p = c.params(true);
    }
    p.validate();
    auto eqs = all_equilibria(p);
    if (c.want_json()) {
      json arr = json::array();
      for (const auto& e : eqs) arr.push_back(to_json(e));
      emit({{"params", params_json(p)}, {"delta1", str(delta1(p))}, {"delta2", str(delta2(p))}, {"equilibria", arr}});
      return kOk;
    }
    std::cout << "alpha=" << str(p.alpha) << " beta=" << str(p.beta) << " gamma=" << str(p.gamma)
              << " delta=" << str(p.delta) << " eta=" << str(p.eta) << "\n";
    std::cout << "Delta1=" << str(delta1(p)) << "  Delta2=" << str(delta2(p)) << "\n";
    std::cout << pad("name", 6) << pad("x", 16) << pad("y", 16) << pad("trace", 14) << pad("det", 14) << pad("kind", 20)
              << "detail\n";
    for (const auto& e : eqs) {
      std::ostringstream xs, ys;
      xs << std::setprecision(10) << e.x.to_double();
      ys << std::setprecision(10) << e.y.to_double();
      std::string detail;
      if (e.kind == Kind::SaddleNode) detail = std::string(sector_name(e.sector)) + " parabolic sector";
      if (e.center_manifold_coeff) detail += (detail.empty() ? "" : ", ") + std::string("a20=") + e.center_manifold_coeff->str();
      std::ostringstream ts, ds;
      ts << std::setprecision(6) << e.trace.to_double();
      ds << std::setprecision(6) << e.det.to_double();
      std::cout << pad(e.name, 6) << pad(xs.str(), 16) << pad(ys.str(), 16) << pad(ts.str(), 14) << pad(ds.str(), 14)
                << pad(kind_name(e.kind), 20) << detail << "\n";
      if (!e.x.is_rational()) std::cout << "      x = " << e.x.str() << "\n";
    }
    return kOk;
  }

  int code = kOk;
};

struct CuspCmd {
  Common c;
  bool from_locus = false;
  std::string method = "both";

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("cusp", "codimension of the nilpotent cusp");
    c.add(sc);
    sc->add_flag("--from-cusp-locus", from_locus, "derive alpha, beta, delta from gamma and eta");
    sc->add_option("--method", method, "closed | chain | both")->check(CLI::IsMember({"closed", "chain", "both"}));
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    Params<Rational> p;
    std::optional<CuspLocus> loc;
    if (from_locus) {
      loc = cusp_locus(c.need("gamma", true), c.need("eta", true));
      p = loc->params();
    } else {
      p = c.params(true);
    }
    std::optional<CuspReport> closed, chain;
    if (method != "chain") closed = cusp_report_closed(p);
    if (method != "closed") chain = cusp_report_chain(p);
    bool agree = true;
    if (closed && chain) {
      auto eq = [](const std::optional<ScaledRoot>& a, const std::optional<ScaledRoot>& b) {
        return a.has_value() == b.has_value() && (!a || *a == *b);
      };
      agree = closed->d20 == chain->d20 && closed->d11 == chain->d11 && eq(closed->M, chain->M) && eq(closed->N, chain->N);
    }
    const CuspReport& r = closed ? *closed : *chain;
    if (c.want_json()) {
      json j{{"params", params_json(p)}};
      if (loc) j["locus"] = to_json(*loc);
      if (closed) j["closed"] = to_json(*closed);
      if (chain) j["chain"] = to_json(*chain);
      if (closed && chain) j["agree"] = agree;
      emit(j);
    } else {
      std::cout << "alpha=" << str(p.alpha) << " beta=" << str(p.beta) << " gamma=" << str(p.gamma)
                << " delta=" << str(p.delta) << " eta=" << str(p.eta) << "\n";
      std::cout << "d20   = " << str(r.d20) << "\n";
      std::cout << "d11   = " << str(r.d11) << "\n";
      if (r.M) std::cout << "M     = " << r.M->str() << "  (" << r.M->to_double() << ")\n";
      if (r.N) std::cout << "N     = " << r.N->str() << "  (" << r.N->to_double() << ")\n";
      if (r.rho1) std::cout << "rho1  = " << str(*r.rho1) << "\n";
      if (r.rho2) std::cout << "rho2  = " << str(*r.rho2) << "\n";
      std::cout << "codim = " << r.codim_tag() << "\n";
      if (closed && chain) std::cout << "closed form and transformation chain " << (agree ? "agree" : "DISAGREE") << "\n";
    }
    return agree ? kOk : kVerify;
  }

  int code = kOk;
};

struct UnfoldCmd {
  Common c;
  std::optional<double> step;

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("unfold", "transversality of the codimension-4 unfolding");
    c.add(sc);
    sc->add_option("--step", step, "finite-difference step (default 1e-5)");
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    Rational g = c.need("gamma", true);
    double h = Resolver(c.cfg).number("solver", "step", step, 1e-5);
    auto u = unfolding_jacobian(g, h);
    if (c.want_json()) {
      emit(to_json(u));
    } else {
      std::cout << "gamma = " << str(g) << "  (eta0 = " << str(eta0_of(g)) << ")\n";
      std::cout << "chi(0) =";
      for (const auto& v : u.chi0) std::cout << " " << std::setprecision(3) << static_cast<double>(v);
      std::cout << "\nJacobian d(chi)/d(lambda), lambda = (beta, alpha, delta, eta):\n";
      for (const auto& row : u.jac) {
        for (const auto& v : row) std::cout << std::setw(16) << std::setprecision(8) << static_cast<double>(v);
        std::cout << "\n";
      }
      std::cout << "det = " << std::setprecision(10) << static_cast<double>(u.jac_det)
                << "  (step/2: " << static_cast<double>(u.jac_det_half) << ", relative change "
                << std::setprecision(3) << u.relative_change() << ")\n";
      std::cout << (u.nonsingular() ? "nonsingular" : "NOT confirmed nonsingular") << "\n";
    }
    return u.nonsingular() ? kOk : kVerify;
  }

  int code = kOk;
};

struct FocalCmd {
  Common c;
  std::optional<std::string> z;
  std::optional<long long> order;
  bool force_float = false, force_exact = false;

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("focal", "focal values at the weak focus");
    c.add(sc);
    sc->add_option("--z", z, "equilibrium abscissa (replaces --alpha/--beta)");
    sc->add_option("--order", order, "number of focal values, 1..5")->check(CLI::Range(1, 5));
    auto* f = sc->add_flag("--float", force_float, "256-bit float evaluation");
    sc->add_flag("--exact", force_exact, "exact rational evaluation (needs rational z)")->excludes(f);
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    Resolver res(c.cfg);
    int ord = static_cast<int>(res.integer("solver", "order", order, 4));
    if (ord < 1 || ord > 5) throw usage_error("--order must lie in 1..5");
    Rational g = c.need("gamma", true), dl = c.need("delta", true), e = c.need("eta", true);
    struct Case {
      QSurd z;
      std::optional<Rational> beta_given;
      double beta_implied = 0;
    };
    std::vector<Case> cases;
    auto zflag = res.rational("model", "z", z, true);
    if (zflag) {
      cases.push_back({QSurd(*zflag), std::nullopt, 0});
    } else {
      Rational a = c.need("alpha", true);
      auto b = c.param("beta", true);
      auto roots = recover_z(a, g, dl, e);
      if (roots.empty()) throw std::domain_error("no z in the Hopf region solves alpha0(z) = alpha");
      for (auto& r : roots) cases.push_back({r.z, b, r.beta0});
    }
    json out = json::array();
    for (const auto& cs : cases) {
      FocalReport rep;
      json extra;
      if (cs.z.is_rational() && !force_float) {
        auto h = hopf_point(cs.z.rational_part(), dl, g, e);
        rep = focal_values(h, ord);
        extra = {{"alpha0", str(h.alpha0)}, {"beta0", str(h.beta0)}, {"det", str(h.d)}};
      } else {
        if (force_exact) throw std::domain_error("z = " + cs.z.str() + " is irrational; use --float");
        rep = focal_values_float<oct>(cs.z.to<oct>(), from_rational<oct>(dl), from_rational<oct>(g),
                                      from_rational<oct>(e), ord);
      }
      json j{{"z", cs.z.str()}, {"z_value", cs.z.to_double()}, {"report", to_json(rep)}};
      if (!extra.is_null()) j["hopf_point"] = extra;
      if (cs.beta_given) {
        j["beta_given"] = str(*cs.beta_given);
        j["beta_implied"] = cs.beta_implied;
      }
      out.push_back(j);
      if (!c.want_json()) {
        std::cout << "z = " << cs.z.str() << " (" << std::setprecision(12) << cs.z.to_double() << ")"
                  << (rep.exact ? "  exact" : "  256-bit float") << "\n";
        if (cs.beta_given)
          std::cout << "  beta given " << str(*cs.beta_given) << " (" << cs.beta_given->get_d() << "), implied by z "
                    << cs.beta_implied << "\n";
        for (int m = 1; m <= ord; ++m)
          std::cout << "  L" << m << m << " = " << rep.numerators[m - 1] << "   L" << m << " = " << std::setprecision(10)
                    << rep.values[m - 1] << "\n";
        std::cout << "  first nonzero: " << (rep.order ? "L" + std::to_string(rep.order) : std::string("none")) << "\n";
      }
    }
    if (c.want_json()) emit({{"gamma", str(g)}, {"delta", str(dl)}, {"eta", str(e)}, {"points", out}});
    return kOk;
  }

  int code = kOk;
};

// Writes one CSV per trajectory plus index.csv into dir.
void write_trajectories(const fs::path& dir, const std::vector<SeedResult>& seeds) {
  fs::create_directories(dir);
  std::ofstream idx(dir / "index.csv");
  idx << "seed,x0,y0,file,status\n" << std::setprecision(17);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    std::ostringstream name;
    name << "traj_" << std::setw(4) << std::setfill('0') << i << ".csv";
    const auto& s = seeds[i];
    idx << i << ',' << s.seed.x << ',' << s.seed.y << ',' << name.str() << ',' << (s.ok ? "ok" : "failed") << '\n';
    if (!s.ok) continue;
    std::ofstream f(dir / name.str());
    write_csv(f, s.traj);
  }
}

struct SimulateCmd {
  Common c;
  std::optional<double> x0, y0, horizon, abs_tol, rel_tol, dt;
  std::optional<std::string> seeds, out_dir, center;
  std::optional<long long> random_n, rng_seed, n_radii;
  std::optional<double> rmin, rmax;
  bool cycles = false;

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("simulate", "integrate trajectories and search for limit cycles");
    c.add(sc);
    sc->add_option("--x0", x0);
    sc->add_option("--y0", y0);
    sc->add_option("--seeds", seeds, "initial states 'x,y;x,y;...'");
    sc->add_option("--random", random_n, "number of random initial states in (0,10)^2");
    sc->add_option("--seed", rng_seed, "random seed");
    sc->add_option("--horizon", horizon);
    sc->add_option("--abs-tol", abs_tol);
    sc->add_option("--rel-tol", rel_tol);
    sc->add_option("--dt", dt, "output sampling interval (0 = every step)");
    sc->add_option("--out-dir", out_dir, "directory for CSV files");
    sc->add_flag("--cycles", cycles, "scan the return map around E2* for limit cycles");
    sc->add_option("--center", center, "return-map centre 'x,y' (default E2*)");
    sc->add_option("--rmin", rmin);
    sc->add_option("--rmax", rmax);
    sc->add_option("--nr", n_radii, "number of radii in the scan");
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    Resolver res(c.cfg);
    Params<Rational> pe = c.params(false);
    pe.validate();
    Params<double> p = pe.as<double>();
    Tolerance tol{res.number("solver", "abs_tol", abs_tol, 1e-10), res.number("solver", "rel_tol", rel_tol, 1e-10)};
    double T = res.number("solver", "horizon", horizon, 200);
    double sdt = res.number("output", "dt", dt, 0.1);
    std::vector<State<double>> inits;
    if (x0 || y0) {
      if (!(x0 && y0)) throw usage_error("--x0 and --y0 go together");
      inits.push_back({*x0, *y0});
    }
    std::string seed_text = res.string("solver", "seeds", seeds, "");
    if (!seed_text.empty()) {
      std::stringstream ss(seed_text);
      std::string item;
      while (std::getline(ss, item, ';')) {
        auto v = cli::split_numbers(item, 2, "--seeds");
        inits.push_back({v[0], v[1]});
      }
    }
    long long nrand = res.integer("solver", "random", random_n, 0);
    if (nrand > 0) {
      Sampler s(static_cast<std::uint64_t>(res.integer("solver", "seed", rng_seed, 1)));
      auto v = random_interior(s, static_cast<int>(nrand));
      inits.insert(inits.end(), v.begin(), v.end());
    }
    bool do_cycles = res.boolean("solver", "cycles", cycles, false);
    if (inits.empty() && !do_cycles) throw usage_error("no initial states: use --x0/--y0, --seeds or --random");

    std::vector<SeedResult> results;
    for (const auto& s0 : inits) {
      SeedResult r;
      r.seed = s0;
      try {
        r.traj = integrate(p, s0, T, tol, sdt);
      } catch (const integration_error& ex) {
        r.ok = false;
        r.error = ex.what();
      }
      results.push_back(std::move(r));
    }
    std::string dir = res.string("output", "dir", out_dir, "");
    if (!dir.empty()) write_trajectories(dir, results);

    json j{{"params", params_json(pe)}, {"tolerance", {tol.abs, tol.rel}}, {"horizon", T}};
    json tj = json::array();
    for (const auto& r : results) {
      json e{{"x0", r.seed.x}, {"y0", r.seed.y}, {"ok", r.ok}};
      if (r.ok) {
        e["final"] = {r.traj.samples.back().x, r.traj.samples.back().y};
        e["samples"] = r.traj.samples.size();
      } else {
        e["error"] = r.error;
      }
      tj.push_back(e);
    }
    j["trajectories"] = tj;
    if (!dir.empty()) j["out_dir"] = dir;

    if (do_cycles) {
      State<double> ctr{};
      std::string ctext = res.string("solver", "center", center, "");
      if (!ctext.empty()) {
        auto v = cli::split_numbers(ctext, 2, "--center");
        ctr = {v[0], v[1]};
      } else {
        bool found = false;
        for (const auto& e : positive_equilibria(pe))
          if (e.name == "E2*" || e.name == "E*") {
            ctr = e.location();
            found = true;
          }
        if (!found) throw std::domain_error("no positive focus to scan around; pass --center");
      }
      double lo = res.number("solver", "rmin", rmin, 0.005), hi = res.number("solver", "rmax", rmax, 0.2);
      long long n = res.integer("solver", "nr", n_radii, 40);
      if (!(hi > lo && lo > 0 && n >= 2)) throw usage_error("need 0 < rmin < rmax and nr >= 2");
      std::vector<double> radii;
      for (long long i = 0; i < n; ++i) radii.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
      auto scan = find_limit_cycles(p, ctr, 0.0, radii, res.number("solver", "return_horizon", std::nullopt, 2000));
      json cj = json::array();
      for (const auto& l : scan.cycles) cj.push_back(to_json(l));
      json disp = json::array();
      for (std::size_t i = 0; i < radii.size(); ++i)
        disp.push_back({{"r", radii[i]},
                        {"displacement", scan.displacement[i] ? json(*scan.displacement[i]) : json("non-returning")}});
      j["center"] = {ctr.x, ctr.y};
      j["cycles"] = cj;
      j["return_map"] = disp;
    }

    if (c.want_json()) {
      emit(j);
    } else {
      for (const auto& r : results) {
        std::cout << std::setprecision(8) << "(" << r.seed.x << ", " << r.seed.y << ") -> ";
        if (r.ok)
          std::cout << "(" << r.traj.samples.back().x << ", " << r.traj.samples.back().y << ") at t=" << T << "\n";
        else
          std::cout << "failed: " << r.error << "\n";
      }
      if (!dir.empty()) std::cout << "wrote " << results.size() << " trajectories and index.csv to " << dir << "\n";
      if (do_cycles) {
        std::cout << "limit cycles on the +x ray from (" << j["center"][0] << ", " << j["center"][1] << "):\n";
        if (j["cycles"].empty()) std::cout << "  none detected\n";
        for (const auto& l : j["cycles"])
          std::cout << "  r=" << l["radius"] << " period=" << l["period"] << " " << l["stability"].get<std::string>()
                    << " slope=" << l["floquet_slope"] << "\n";
      }
    }
    bool all_ok = std::all_of(results.begin(), results.end(), [](const SeedResult& r) { return r.ok; });
    return all_ok ? kOk : kMath;
  }

  int code = kOk;
};

struct PortraitCmd {
  Common c;
  std::optional<std::string> window, grid, svg, csv_dir;
  std::optional<double> horizon, dt;

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("portrait", "phase portrait as SVG (and CSV)");
    c.add(sc);
    sc->add_option("--window", window, "xmin,xmax,ymin,ymax");
    sc->add_option("--grid", grid, "nx,ny seed grid");
    sc->add_option("--horizon", horizon);
    sc->add_option("--dt", dt, "sampling interval");
    sc->add_option("--svg", svg, "SVG output path");
    sc->add_option("--csv-dir", csv_dir, "directory for per-seed CSV files");
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    Resolver res(c.cfg);
    Params<Rational> pe = c.params(false);
    pe.validate();
    auto wv = cli::split_numbers(res.string("output", "window", window, "0,1,0,1"), 4, "--window");
    auto gv = cli::split_numbers(res.string("output", "grid", grid, "6,6"), 2, "--grid");
    if (gv[0] < 0 || gv[1] < 0) throw usage_error("--grid must be non-negative");
    Window w{wv[0], wv[1], wv[2], wv[3]};
    std::vector<MarkedPoint> marks;
    for (const auto& e : all_equilibria(pe)) marks.push_back({e.name, e.location(), kind_name(e.kind)});
    double T = res.number("solver", "horizon", horizon, 100);
    double sdt = res.number("output", "dt", dt, 0.05);
    Tolerance tol{res.number("solver", "abs_tol", std::nullopt, 1e-8), res.number("solver", "rel_tol", std::nullopt, 1e-8)};
    auto d = phase_portrait(pe.as<double>(), w, static_cast<int>(gv[0]), static_cast<int>(gv[1]), T, tol, sdt, marks);
    std::string svg_path = res.string("output", "svg", svg, "portrait.svg");
    {
      std::ofstream f(svg_path);
      if (!f) throw std::runtime_error("cannot write " + svg_path);
      f << render_svg(d);
    }
    std::string dir = res.string("output", "csv_dir", csv_dir, "");
    if (!dir.empty()) write_trajectories(dir, d.seeds);
    int failed = 0;
    for (const auto& s : d.seeds) failed += s.ok ? 0 : 1;
    if (c.want_json()) {
      json eq = json::array();
      for (const auto& m : marks) eq.push_back({{"name", m.label}, {"x", m.at.x}, {"y", m.at.y}, {"kind", m.kind}});
      json fin = json::array();
      for (const auto& s : d.seeds)
        fin.push_back(s.ok ? json{{"seed", {s.seed.x, s.seed.y}},
                                  {"final", {s.traj.samples.back().x, s.traj.samples.back().y}}}
                           : json{{"seed", {s.seed.x, s.seed.y}}, {"error", s.error}});
      emit({{"params", params_json(pe)}, {"svg", svg_path}, {"csv_dir", dir}, {"seeds", d.seeds.size()},
            {"failed", failed}, {"equilibria", eq}, {"trajectories", fin}});
    } else {
      std::cout << "wrote " << svg_path << " with " << d.seeds.size() << " trajectories (" << failed << " failed)";
      if (!dir.empty()) std::cout << " and CSV files in " << dir;
      std::cout << "\n";
    }
    return kOk;
  }

  int code = kOk;
};

struct SweepCmd {
  Common c;
  std::optional<std::string> param, from, to, out;
  std::optional<long long> steps;

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("sweep", "classify equilibria along a one-parameter line");
    c.add(sc);
    sc->add_option("--param", param, "parameter to vary")->check(CLI::IsMember({"alpha", "beta", "gamma", "delta", "eta"}));
    sc->add_option("--from", from, "start value p/q");
    sc->add_option("--to", to, "end value p/q");
    sc->add_option("--steps", steps, "number of intervals");
    sc->add_option("--out", out, "CSV output path");
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    Resolver res(c.cfg);
    std::string name = res.string("solver", "param", param, "");
    if (name.empty()) throw usage_error("missing --param");
    auto a = res.rational("solver", "from", from, true), b = res.rational("solver", "to", to, true);
    if (!a || !b) throw usage_error("missing --from/--to");
    long long n = res.integer("solver", "steps", steps, 10);
    if (n < 1) throw usage_error("--steps must be positive");
    json rows = json::array();
    std::ostringstream csv;
    csv << "value,delta1,delta2,equilibria\n";
    for (long long i = 0; i <= n; ++i) {
      Rational v = *a + (*b - *a) * ratio(static_cast<long>(i), static_cast<long>(n));
      Params<Rational> p;
      auto get = [&](const char* k) { return name == k ? v : c.need(k, true); };
      p = {get("alpha"), get("beta"), get("gamma"), get("delta"), get("eta")};
      p.validate();
      auto eqs = all_equilibria(p);
      std::string summary;
      json ej = json::array();
      for (const auto& e : eqs) {
        summary += (summary.empty() ? "" : " ") + e.name + ":" + kind_name(e.kind);
        ej.push_back({{"name", e.name}, {"kind", kind_name(e.kind)}, {"x", e.x.to_double()}, {"y", e.y.to_double()}});
      }
      csv << str(v) << ',' << str(delta1(p)) << ',' << str(delta2(p)) << ',' << summary << '\n';
      rows.push_back({{"value", str(v)}, {"delta1", str(delta1(p))}, {"delta2", str(delta2(p))}, {"equilibria", ej}});
    }
    std::string path = res.string("output", "csv", out, "");
    if (!path.empty()) {
      std::ofstream f(path);
      if (!f) throw std::runtime_error("cannot write " + path);
      f << csv.str();
    }
    if (c.want_json())
      emit({{"param", name}, {"rows", rows}});
    else
      std::cout << csv.str();
    return kOk;
  }

  int code = kOk;
};

struct VerifyCmd {
  Common c;
  std::vector<int> only;
  bool all = false;

  void add(CLI::App& root) {
    auto* sc = root.add_subcommand("verify", "regression checks against the reference results");
    c.add(sc, false);
    sc->add_option("--only", only, "criterion ids to run")->delimiter(',')->check(CLI::Range(1, 10));
    sc->add_flag("--all", all, "also run the cycle-detection criterion 10");
    sc->callback([this] { code = run(); });
  }

  int run() {
    c.load();
    std::vector<int> ids = only;
    if (ids.empty())
      for (int i = 1; i <= (all ? 10 : 9); ++i) ids.push_back(i);
    bool ok = true;
    json arr = json::array();
    for (int id : ids) {
      auto r = run_criterion(id);
      ok = ok && r.pass;
      if (c.want_json())
        arr.push_back(to_json(r));
      else
        std::cout << format_line(r) << std::endl;
    }
    if (c.want_json()) emit({{"pass", ok}, {"criteria", arr}});
    else std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
    return ok ? kOk : kVerify;
  }

  int code = kOk;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Allee-effect predator-prey analysis: equilibria, cusp normal forms, focal values, simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "allee 1.0");
  ClassifyCmd classify;
  CuspCmd cusp;
  UnfoldCmd unfold;
  FocalCmd focal;
  SimulateCmd simulate;
  PortraitCmd portrait;
  SweepCmd sweep;
  VerifyCmd verify;
  classify.add(app);
  cusp.add(app);
  unfold.add(app);
  focal.add(app);
  simulate.add(app);
  portrait.add(app);
  sweep.add(app);
  verify.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kMath;
  } catch (const integration_error& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return kMath;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMath;
  }
  for (int code : {classify.code, cusp.code, unfold.code, focal.code, simulate.code, portrait.code, sweep.code,
                   verify.code})
    if (code != kOk) return code;
  return kOk;
}
