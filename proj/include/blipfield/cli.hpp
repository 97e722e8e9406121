#pragma once

// Command-line front end. Every subcommand validates its flags, computes,
// and writes a CSV or JSON file that embeds the fully resolved configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "blipfield/blipfield.hpp"

namespace blipfield::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { ok = 0, validation = 2, io = 3, non_finite = 4 };

/// 17 significant digits, independent of the global locale.
inline std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // print negative zero as 0
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

/// Resolved configuration, in declaration order.
class Metadata {
 public:
  void add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value) { add(std::move(key), fmt(value)); }
  void add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, int value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, std::size_t value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + fmt(values[i]);
    add(std::move(key), s);
  }
  const auto& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Output {
  Metadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json json = nlohmann::ordered_json::object();
};

class NonFinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_finite(const nlohmann::ordered_json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw NonFinite("non-finite value in " + where);
  if (j.is_structured())
    for (const auto& [k, v] : j.items()) check_finite(v, where + "/" + k);
}

inline std::string render(const Output& out, const std::string& format) {
  for (const auto& row : out.rows)
    for (double v : row)
      if (!std::isfinite(v)) throw NonFinite("non-finite value in output table");
  check_finite(out.json, "json");

  std::ostringstream os;
  if (format == "csv") {
    for (const auto& [k, v] : out.meta.entries()) os << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < out.columns.size(); ++i) os << (i ? "," : "") << out.columns[i];
    os << '\n';
    for (const auto& row : out.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
      os << '\n';
    }
    return os.str();
  }
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : out.meta.entries()) meta[k] = v;
  doc["metadata"] = meta;
  for (const auto& [k, v] : out.json.items()) doc[k] = v;
  if (!out.columns.empty()) {
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < out.columns.size(); ++c) {
      std::vector<double> col;
      col.reserve(out.rows.size());
      for (const auto& row : out.rows) col.push_back(row[c]);
      table[out.columns[c]] = col;
    }
    doc["table"] = table;
  }
  return doc.dump(2) + "\n";
}

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    require(ec == std::errc() && ptr == last && std::isfinite(v), ErrorCode::invalid_argument,
            flag + ": cannot parse number '" + item + "'");
    out.push_back(v);
  }
  require(!out.empty(), ErrorCode::invalid_argument, flag + ": empty list");
  return out;
}

struct PacketFlag {
  GaussianSpec spec;
};

inline PacketFlag parse_packet(const std::string& text) {
  const std::string prefix = "gaussian:";
  require(text.rfind(prefix, 0) == 0, ErrorCode::invalid_argument,
          "--packet must be gaussian:x0,sigma,k0");
  const auto v = parse_list(text.substr(prefix.size()), "--packet");
  require(v.size() == 3, ErrorCode::invalid_argument, "--packet must be gaussian:x0,sigma,k0");
  return {{v[0], v[1], v[2]}};
}

inline SpatialGrid parse_grid(const std::string& text) {
  const auto v = parse_list(text, "--grid");
  require(v.size() == 2, ErrorCode::invalid_argument, "--grid must be L,N");
  require(v[1] >= 1.0 && v[1] == std::floor(v[1]) && v[1] <= 1073741824.0,
          ErrorCode::invalid_argument, "--grid point count must be a positive integer");
  return SpatialGrid(v[0], static_cast<std::size_t>(v[1]));
}

inline CoherentAmplitude parse_alpha(const std::string& text) {
  const auto v = parse_list(text, "--alpha");
  require(v.size() == 1 || v.size() == 2, ErrorCode::invalid_argument, "--alpha must be re[,im]");
  return {cplx(v[0], v.size() == 2 ? v[1] : 0.0)};
}

inline PropagatorKind parse_model(const std::string& m) {
  return m == "blip" ? PropagatorKind::blip : PropagatorKind::standard;
}

inline Sign parse_sign(int s) { return s > 0 ? Sign::plus : Sign::minus; }

/// Flags shared by every subcommand.
struct Common {
  std::string out;
  std::string format;
  Units units;

  void attach(CLI::App* app) {
    app->add_option("--out", out, "Output file (stdout when omitted)");
    app->add_option("--format", format, "csv or json (default from --out extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--hbar", units.hbar, "Reduced Planck constant")->capture_default_str();
    app->add_option("--c", units.c, "Speed of light")->capture_default_str();
    app->add_option("--eps0", units.eps0, "Vacuum permittivity")->capture_default_str();
    app->add_option("--area", units.area, "Transverse area")->capture_default_str();
  }

  std::string resolved_format() const {
    if (!format.empty()) return format;
    if (out.size() >= 5 && out.substr(out.size() - 5) == ".json") return "json";
    return "csv";
  }

  void describe(Metadata& m, const std::string& command) const {
    m.add("tool", std::string("blipfield ") + kVersion);
    m.add("command", command);
    m.add("format", resolved_format());
    m.add("out", out.empty() ? std::string("-") : out);
    m.add("hbar", units.hbar);
    m.add("c", units.c);
    m.add("eps0", units.eps0);
    m.add("area", units.area);
  }
};

}  // namespace detail

/// Parses and executes one command line (program name excluded). Results go
/// to --out or `out`; diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blip and standard photon models: propagation, detection and Casimir sums",
               "blipfield"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  detail::Common common;
  std::function<Output()> job;
  std::string command;

  // propagate
  auto* prop = app.add_subcommand("propagate", "Evolve a wavepacket and tabulate it");
  struct {
    std::string model = "blip", packet = "gaussian:0,1,0", grid = "256,4096", times = "0";
    int sign = 1;
  } pf;
  prop->add_option("--model", pf.model)->check(CLI::IsMember({"blip", "standard"}))->capture_default_str();
  prop->add_option("--packet", pf.packet, "gaussian:x0,sigma,k0")->capture_default_str();
  prop->add_option("--grid", pf.grid, "L,N")->capture_default_str();
  prop->add_option("--times", pf.times, "Comma-separated times >= 0")->capture_default_str();
  prop->add_option("--sign", pf.sign, "Propagation sign s")->check(CLI::IsMember({1, -1}))->capture_default_str();

  // fermi
  auto* fermi = app.add_subcommand("fermi", "Two-detector causality experiment");
  struct {
    std::string model = "blip", packet = "gaussian:-20,1,1", grid = "256,4096", alpha = "1";
    std::string t1 = "30,32,34,36,38,40";
    double L1 = 10.0, L2 = 40.0, width = 12.0;
  } ff;
  fermi->add_option("--model", ff.model)->check(CLI::IsMember({"blip", "standard"}))->capture_default_str();
  fermi->add_option("--packet", ff.packet, "gaussian:x0,sigma,k0")->capture_default_str();
  fermi->add_option("--grid", ff.grid, "L,N")->capture_default_str();
  fermi->add_option("--alpha", ff.alpha, "Coherent amplitude re[,im]")->capture_default_str();
  fermi->add_option("--t1", ff.t1, "Detector-1 times (>= 3)")->capture_default_str();
  fermi->add_option("--L1", ff.L1)->capture_default_str();
  fermi->add_option("--L2", ff.L2)->capture_default_str();
  fermi->add_option("--width", ff.width, "Detector length")->capture_default_str();

  // casimir
  auto* cas = app.add_subcommand("casimir", "Casimir energy and force between two mirrors");
  struct {
    int dim = 1;
    std::string D = "1";
    long long mmax = 0;
    std::string eps_ladder;
    bool oracle = false;
    int oracle_ntrunc = 6;
    int oracle_points = 200;
  } cf;
  cas->add_option("--dim", cf.dim)->required()->check(CLI::IsMember({1, 3}));
  cas->add_option("--D", cf.D, "Mirror separation(s), comma-separated")->capture_default_str();
  cas->add_option("--mmax", cf.mmax, "Last summed image index (default 1e6 in 1D, 1e4 in 3D)");
  cas->add_option("--eps-ladder", cf.eps_ladder, "Regulators for the image-kernel cross-check");
  cas->add_flag("--oracle", cf.oracle, "Also run the image-substitution oracle");
  cas->add_option("--oracle-ntrunc", cf.oracle_ntrunc)->capture_default_str();
  cas->add_option("--oracle-points", cf.oracle_points)->capture_default_str();

  // kernel
  auto* ker = app.add_subcommand("kernel", "Tabulate regularized zero-point kernels");
  struct {
    int dim = 1;
    std::string delta = "1", eps = "0.01,0.001,0.0001";
  } kf;
  ker->add_option("--dim", kf.dim)->check(CLI::IsMember({1, 3}))->capture_default_str();
  ker->add_option("--delta", kf.delta, "Separations")->capture_default_str();
  ker->add_option("--eps", kf.eps, "Regulators")->capture_default_str();

  // cavity-field
  auto* cav = app.add_subcommand("cavity-field", "Folded field profile inside a cavity");
  struct {
    double D = 16.0, t = 0.0, eps = 0.0;
    std::size_t points = 1024;
    int nimg = 8, sign = 1;
    std::string packet = "gaussian:0,0.5,0", alpha = "1", route = "periodic", observable = "E";
  } vf;
  cav->add_option("--D", vf.D)->capture_default_str();
  cav->add_option("--points", vf.points, "Grid points over two cavity widths")->capture_default_str();
  cav->add_option("--packet", vf.packet, "gaussian:x0,sigma,k0")->capture_default_str();
  cav->add_option("--alpha", vf.alpha)->capture_default_str();
  cav->add_option("--t", vf.t)->capture_default_str();
  cav->add_option("--eps", vf.eps, "Regulator")->capture_default_str();
  cav->add_option("--nimg", vf.nimg, "Image truncation for the image-sum route")->capture_default_str();
  cav->add_option("--sign", vf.sign)->check(CLI::IsMember({1, -1}))->capture_default_str();
  cav->add_option("--route", vf.route)->check(CLI::IsMember({"periodic", "image-sum"}))->capture_default_str();
  cav->add_option("--observable", vf.observable)->check(CLI::IsMember({"E", "B"}))->capture_default_str();

  // images-oracle
  auto* img = app.add_subcommand("images-oracle", "Image-index substitution check");
  struct {
    double D = 1.0;
    int ntrunc = 6, points = 200;
  } of;
  img->add_option("--D", of.D)->capture_default_str();
  img->add_option("--ntrunc", of.ntrunc)->capture_default_str();
  img->add_option("--points", of.points, "Gauss nodes per cavity width (multiple of 20)")->capture_default_str();

  for (auto* sub : {prop, fermi, cas, ker, cav, img}) common.attach(sub);

  prop->callback([&] {
    command = "propagate";
    job = [&] {
      Output o;
      common.describe(o.meta, command);
      o.meta.add("model", pf.model);
      o.meta.add("packet", pf.packet);
      o.meta.add("grid", pf.grid);
      o.meta.add("times", pf.times);
      o.meta.add("sign", pf.sign);
      common.units.validate();
      const SpatialGrid grid = detail::parse_grid(pf.grid);
      const auto packet = detail::parse_packet(pf.packet);
      const auto times = detail::parse_list(pf.times, "--times");
      for (double t : times) require(t >= 0.0, ErrorCode::invalid_argument, "--times must be >= 0");
      const auto kind = detail::parse_model(pf.model);
      const BlipWavepacket psi0 = gaussian_packet(grid, packet.spec, detail::parse_sign(pf.sign));

      o.columns = {"t", "x", "abs2", "re", "im"};
      nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
      for (double t : times) {
        const BlipWavepacket psi = evolve(psi0, t, kind, common.units);
        for (std::size_t j = 0; j < grid.size(); ++j)
          o.rows.push_back({t, grid.x(j), std::norm(psi.amp[j]), psi.amp[j].real(), psi.amp[j].imag()});
        blocks.push_back({{"t", t},
                          {"norm", norm_sq(psi)},
                          {"mean_position", mean_position(psi)},
                          {"light_cone_leakage", light_cone_leakage(psi0, t, kind, common.units)}});
      }
      o.json["blocks"] = blocks;
      return o;
    };
  });

  fermi->callback([&] {
    command = "fermi";
    job = [&] {
      Output o;
      common.describe(o.meta, command);
      o.meta.add("model", ff.model);
      o.meta.add("packet", ff.packet);
      o.meta.add("grid", ff.grid);
      o.meta.add("alpha", ff.alpha);
      o.meta.add("t1", ff.t1);
      o.meta.add("L1", ff.L1);
      o.meta.add("L2", ff.L2);
      o.meta.add("width", ff.width);
      common.units.validate();
      const SpatialGrid grid = detail::parse_grid(ff.grid);
      const auto packet = detail::parse_packet(ff.packet);
      const auto alpha = detail::parse_alpha(ff.alpha);
      const auto t1 = detail::parse_list(ff.t1, "--t1");
      const ExperimentGeometry geo{ff.L1, ff.L2, ff.width};
      geo.validate(grid);
      const BlipWavepacket psi = gaussian_packet(grid, packet.spec);
      const ExperimentResult r =
          causality_report(detail::parse_model(ff.model), psi, geo, alpha, t1, common.units);
      o.columns = {"t1", "P1", "t2", "P2", "ratio", "early_click_mass"};
      for (std::size_t i = 0; i < r.t1.size(); ++i)
        o.rows.push_back({r.t1[i], r.p1[i], r.t2[i], r.p2[i], r.ratio[i], r.early_click_mass});
      o.json["ratio_spread"] = r.ratio_spread;
      o.json["early_click_mass"] = r.early_click_mass;
      o.json["delay"] = r.delay;
      o.json["arrival_time"] = r.arrival_time;
      o.json["formula_faithful_only"] = r.formula_faithful_only;
      o.json["early_t2"] = r.early_t2;
      o.json["early_P2"] = r.early_p2;
      return o;
    };
  });

  cas->callback([&] {
    command = "casimir";
    job = [&] {
      Output o;
      const long long mmax = cf.mmax != 0 ? cf.mmax : (cf.dim == 1 ? 1000000LL : 10000LL);
      common.describe(o.meta, command);
      o.meta.add("dim", cf.dim);
      o.meta.add("D", cf.D);
      o.meta.add("mmax", mmax);
      o.meta.add("eps_ladder", cf.eps_ladder.empty() ? std::string("-") : cf.eps_ladder);
      o.meta.add("oracle", std::string(cf.oracle ? "true" : "false"));
      if (cf.oracle) {
        o.meta.add("oracle_ntrunc", cf.oracle_ntrunc);
        o.meta.add("oracle_points", cf.oracle_points);
      }
      common.units.validate();
      const auto Ds = detail::parse_list(cf.D, "--D");
      std::vector<double> ladder;
      if (!cf.eps_ladder.empty()) ladder = detail::parse_list(cf.eps_ladder, "--eps-ladder");
      for (double D : Ds) {
        CavitySpec spec;
        spec.D = D;
        spec.m_max = mmax;
        spec.units = common.units;
        spec.validate();
        for (double e : ladder)
          require(e > 0.0 && e < D / 10.0, ErrorCode::regulator, "--eps-ladder entries need 0 < eps < D/10");
      }
      o.columns = {"D", "energy_correction", "force", "truncation_error_estimate",
                   "force_truncation_error_estimate"};
      if (!ladder.empty()) o.columns.push_back("image_route_energy");
      nlohmann::ordered_json results = nlohmann::ordered_json::array();
      for (double D : Ds) {
        CavitySpec spec;
        spec.D = D;
        spec.m_max = mmax;
        spec.units = common.units;
        const CasimirResult r = cf.dim == 1 ? casimir_1d(spec) : casimir_3d(spec);
        std::vector<double> row{D, r.energy_correction, r.force, r.truncation_error_estimate,
                                r.force_truncation_error_estimate};
        nlohmann::ordered_json j{{"D", D},
                                 {"energy_correction", r.energy_correction},
                                 {"force", r.force},
                                 {"truncation_error_estimate", r.truncation_error_estimate},
                                 {"force_truncation_error_estimate", r.force_truncation_error_estimate},
                                 {"divergent_free_part", r.divergent_free_part}};
        if (!ladder.empty()) {
          const double e = regulator_limit(
              [&](double eps) {
                return cf.dim == 1 ? casimir_1d_regulated(D, eps, mmax, common.units)
                                   : casimir_3d_regulated(D, eps, mmax, common.units);
              },
              ladder);
          row.push_back(e);
          j["image_route_energy"] = e;
        }
        o.rows.push_back(std::move(row));
        results.push_back(j);
      }
      o.json["results"] = results;
      if (results.size() == 1) {
        for (const auto& [k, v] : results[0].items()) o.json[k] = v;
      }
      if (cf.oracle) o.json["image_oracle_discrepancy"] = appendix_c_oracle(Ds.front(), cf.oracle_ntrunc, cf.oracle_points);
      return o;
    };
  });

  ker->callback([&] {
    command = "kernel";
    job = [&] {
      Output o;
      common.describe(o.meta, command);
      o.meta.add("dim", kf.dim);
      o.meta.add("delta", kf.delta);
      o.meta.add("eps", kf.eps);
      const auto deltas = detail::parse_list(kf.delta, "--delta");
      const auto eps = detail::parse_list(kf.eps, "--eps");
      auto k = [&](double d, double e) { return kf.dim == 1 ? kernel1d(d, e) : kernel3d(d, e); };
      o.columns = {"delta", "eps", "kernel"};
      nlohmann::ordered_json limits = nlohmann::ordered_json::array();
      for (double d : deltas) {
        for (double e : eps) o.rows.push_back({d, e, k(d, e)});
        if (eps.size() >= 2)
          limits.push_back({{"delta", d}, {"limit", regulator_limit([&](double e) { return k(d, e); }, eps)}});
      }
      o.json["limits"] = limits;
      return o;
    };
  });

  cav->callback([&] {
    command = "cavity-field";
    job = [&] {
      Output o;
      common.describe(o.meta, command);
      o.meta.add("D", vf.D);
      o.meta.add("points", vf.points);
      o.meta.add("packet", vf.packet);
      o.meta.add("alpha", vf.alpha);
      o.meta.add("t", vf.t);
      o.meta.add("eps", vf.eps);
      o.meta.add("nimg", vf.nimg);
      o.meta.add("sign", vf.sign);
      o.meta.add("route", vf.route);
      o.meta.add("observable", vf.observable);
      require(vf.t >= 0.0, ErrorCode::invalid_argument, "--t must be >= 0");
      CavitySpec spec;
      spec.D = vf.D;
      spec.eps = vf.eps;
      spec.n_img = vf.nimg;
      spec.units = common.units;
      spec.validate();
      const SpatialGrid grid = cavity_grid(vf.D, vf.points);
      const BlipWavepacket psi = gaussian_packet(grid, detail::parse_packet(vf.packet).spec, detail::parse_sign(vf.sign));
      const auto profile = folded_field_profile(
          psi, detail::parse_alpha(vf.alpha), spec, vf.t,
          vf.observable == "E" ? FieldComponent::E : FieldComponent::B,
          vf.route == "periodic" ? FoldedRoute::periodic : FoldedRoute::image_sum);
      o.columns = {"x", "value"};
      for (std::size_t i = 0; i < profile.x.size(); ++i) o.rows.push_back({profile.x[i], profile.value[i]});
      return o;
    };
  });

  img->callback([&] {
    command = "images-oracle";
    job = [&] {
      Output o;
      common.describe(o.meta, command);
      o.meta.add("D", of.D);
      o.meta.add("ntrunc", of.ntrunc);
      o.meta.add("points", of.points);
      require(of.ntrunc >= 4, ErrorCode::invalid_argument, "--ntrunc must be >= 4");
      const double d = appendix_c_oracle(of.D, of.ntrunc, of.points);
      o.columns = {"D", "ntrunc", "discrepancy"};
      o.rows.push_back({of.D, static_cast<double>(of.ntrunc), d});
      o.json["discrepancy"] = d;
      return o;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::validation;
  }

  std::string text;
  try {
    text = detail::render(job(), common.resolved_format());
  } catch (const blipfield::Error& e) {
    err << "blipfield " << command << ": " << e.what() << '\n';
    return ExitCode::validation;
  } catch (const NonFinite& e) {
    err << "blipfield " << command << ": " << e.what() << '\n';
    return ExitCode::non_finite;
  }

  if (common.out.empty()) {
    out << text;
    return out ? ExitCode::ok : ExitCode::io;
  }
  std::ofstream file(common.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "blipfield: cannot open '" << common.out << "' for writing\n";
    return ExitCode::io;
  }
  file << text;
  file.close();
  if (!file) {
    err << "blipfield: failed writing '" << common.out << "'\n";
    return ExitCode::io;
  }
  return ExitCode::ok;
}

}  // namespace blipfield::cli
