#include "hllg/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace hllg {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::type_one:
      return "type_one";
    case SystemKind::type_two:
      return "type_two";
    case SystemKind::schrodinger:
      return "schrodinger";
  }
  return "?";
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::explicit_rk4 ? "explicit_rk4" : "imex_euler";
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string> kSections{"",          "grid",          "material", "initial",
                                      "transport", "applied_field", "stepper",  "output"};

class Document {
 public:
  explicit Document(std::string_view text) {
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      const std::string_view raw =
          text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      std::string line = trim(raw.substr(0, raw.find('#')));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
        section = trim(std::string_view(line).substr(1, line.size() - 2));
        if (!kSections.count(section) || section.empty()) {
          fail(line_no, "unknown section [" + section + "]");
        }
        if (!seen_sections_.insert(section).second) {
          fail(line_no, "duplicate section [" + section + "]");
        }
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) fail(line_no, "empty key");
      const std::string name = section.empty() ? key : section + "." + key;
      if (entries_.count(name)) fail(line_no, name + ": duplicate key");
      entries_[name] = Entry{value, line_no, false};
    }
  }

  [[noreturn]] static void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
  }

  [[noreturn]] void fail_key(const std::string& name, const std::string& msg) const {
    const auto it = entries_.find(name);
    if (it != entries_.end()) fail(it->second.line, name + ": " + msg);
    throw ConfigError(name + ": " + msg);
  }

  bool has(const std::string& name) const { return entries_.count(name) > 0; }

  const Entry* get(const std::string& name) {
    const auto it = entries_.find(name);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  double number(const std::string& name, double fallback) {
    const Entry* e = get(name);
    return e ? parse_double(name, *e, e->value) : fallback;
  }

  long integer(const std::string& name, long fallback) {
    const Entry* e = get(name);
    if (!e) return fallback;
    long v = 0;
    const auto* end = e->value.data() + e->value.size();
    const auto res = std::from_chars(e->value.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) fail(e->line, name + ": expected an integer");
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& name, std::uint64_t fallback) {
    const Entry* e = get(name);
    if (!e) return fallback;
    std::uint64_t v = 0;
    const auto* end = e->value.data() + e->value.size();
    const auto res = std::from_chars(e->value.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      fail(e->line, name + ": expected a non-negative integer");
    }
    return v;
  }

  bool boolean(const std::string& name, bool fallback) {
    const Entry* e = get(name);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(e->line, name + ": expected true or false");
  }

  std::string word(const std::string& name, const std::string& fallback) {
    const Entry* e = get(name);
    return e ? e->value : fallback;
  }

  std::vector<double> numbers(const std::string& name, std::size_t min_count,
                              std::size_t max_count) {
    const Entry* e = get(name);
    if (!e) return {};
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(name, *e, trim(item)));
    if (out.size() < min_count || out.size() > max_count) {
      fail(e->line, name + ": expected " + std::to_string(min_count) +
                        (min_count == max_count ? "" : "-" + std::to_string(max_count)) +
                        " comma-separated numbers");
    }
    return out;
  }

  Vec3 vec3(const std::string& name, const Vec3& fallback) {
    const auto v = numbers(name, 3, 3);
    return v.empty() ? fallback : Vec3(v[0], v[1], v[2]);
  }

  int line_of(const std::string& name) const {
    const auto it = entries_.find(name);
    return it == entries_.end() ? 0 : it->second.line;
  }

  void reject_unused() const {
    for (const auto& [name, e] : entries_) {
      if (!e.used) fail(e.line, name + ": unknown or inapplicable key");
    }
  }

 private:
  static double parse_double(const std::string& name, const Entry& e, const std::string& text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
      fail(e.line, name + ": expected a finite number, got '" + text + "'");
    }
    return v;
  }

  std::map<std::string, Entry> entries_;
  std::set<std::string> seen_sections_;
};

void parse_grid(Document& doc, RunConfig& c) {
  const long dim = doc.integer("grid.dim", 3);
  if (dim != 2 && dim != 3) doc.fail_key("grid.dim", "must be 2 or 3");
  c.grid.dim = int(dim);
  const std::size_t d = std::size_t(dim);
  const auto ext = doc.numbers("grid.extents", d, d);
  if (ext.empty()) doc.fail_key("grid.extents", "required");
  const auto res = doc.numbers("grid.resolution", d, d);
  if (res.empty()) doc.fail_key("grid.resolution", "required");
  c.grid.extents = {1.0, 1.0, 1.0};
  c.grid.resolution = {1, 1, 1};
  for (std::size_t a = 0; a < d; ++a) {
    if (!(ext[a] > 0.0)) doc.fail_key("grid.extents", "must be positive");
    if (res[a] != std::floor(res[a]) || res[a] < 4 || res[a] > 1e6) {
      doc.fail_key("grid.resolution", "must be integers >= 4");
    }
    c.grid.extents[a] = ext[a];
    c.grid.resolution[a] = int(res[a]);
  }
  if (dim == 2) c.grid.extents[2] = 0.0;
  // Normalise through the grid so the stored spec is canonical.
  c.grid = Grid(c.grid).spec();
}

void parse_material(Document& doc, RunConfig& c) {
  const std::string system = doc.word("material.system", "type_one");
  if (system == "type_one") {
    c.system = SystemKind::type_one;
  } else if (system == "type_two") {
    c.system = SystemKind::type_two;
  } else if (system == "schrodinger") {
    c.system = SystemKind::schrodinger;
  } else {
    doc.fail_key("material.system", "expected type_one, type_two or schrodinger");
  }
  MaterialParams& m = c.material;
  m.alpha = doc.number("material.alpha", 1.0);
  m.beta = doc.number("material.beta", 0.0);
  m.gamma = doc.number("material.gamma", 0.0);
  m.epsilon = doc.number("material.epsilon", 0.0);
  m.anisotropy = doc.number("material.anisotropy", 0.0);
  m.zeeman = 0.0;
  m.c_pi = m.anisotropy;
  if (m.beta < 0.0) doc.fail_key("material.beta", "must be non-negative");
  if (m.epsilon < 0.0) doc.fail_key("material.epsilon", "must be non-negative");
  if (m.anisotropy < 0.0) doc.fail_key("material.anisotropy", "must be non-negative");
  if (c.system == SystemKind::schrodinger && m.beta != 0.0) {
    doc.fail_key("material.beta", "must be 0 when material.system = schrodinger");
  }
  if (m.alpha * m.alpha + m.beta * m.beta <= 0.0) {
    doc.fail_key(doc.has("material.alpha") ? "material.alpha" : "material.beta",
                 "alpha^2 + beta^2 must be positive");
  }
}

void parse_initial(Document& doc, RunConfig& c) {
  const std::string kind = doc.word("initial.kind", "uniform");
  if (kind == "uniform") {
    const Vec3 d = doc.vec3("initial.direction", Vec3(0, 0, 1));
    if (d.norm() == 0.0) doc.fail_key("initial.direction", "must be nonzero");
    c.initial = UniformSpec{d};
  } else if (kind == "helix") {
    HelixSpec h;
    const long axis = doc.integer("initial.axis", 3);
    if (axis < 1 || axis > 3) doc.fail_key("initial.axis", "must be 1, 2 or 3");
    h.axis = int(axis - 1);
    h.wavenumber = doc.number("initial.wavenumber", 1.0);
    h.bump_amplitude = doc.number("initial.bump_amplitude", 0.0);
    h.bump_center = doc.vec3("initial.bump_center", Vec3::Zero());
    h.bump_radius = doc.number("initial.bump_radius", 1.0);
    if (!(h.bump_radius > 0.0)) doc.fail_key("initial.bump_radius", "must be positive");
    c.initial = h;
  } else if (kind == "skyrmion") {
    SkyrmionSeedSpec s;
    s.center = doc.vec3("initial.center", s.center);
    s.radius = doc.number("initial.radius", s.radius);
    if (!(s.radius > 0.0)) doc.fail_key("initial.radius", "must be positive");
    c.initial = s;
  } else if (kind == "random_unit") {
    if (!c.has_seed) doc.fail_key("initial.kind", "random_unit requires a top-level seed");
    c.initial = RandomUnitSpec{c.seed};
  } else {
    doc.fail_key("initial.kind", "expected uniform, helix, skyrmion or random_unit");
  }
}

void parse_transport(Document& doc, RunConfig& c) {
  TransportSpec& t = c.transport;
  const std::string kind = doc.word("transport.kind", "none");
  if (kind == "none") {
    t.kind = TransportSpec::Kind::none;
  } else if (kind == "rigid") {
    t.kind = TransportSpec::Kind::rigid;
    t.offset = doc.vec3("transport.offset", Vec3::Zero());
    t.omega = doc.vec3("transport.omega", Vec3(0, 0, 1));
  } else if (kind == "stream2d") {
    t.kind = TransportSpec::Kind::stream2d;
    t.amplitude = doc.number("transport.amplitude", 1.0);
  } else {
    doc.fail_key("transport.kind", "expected none, rigid or stream2d");
  }
  const std::string cond = doc.word("transport.condition", "none");
  if (cond == "none") {
    t.declared_condition = '-';
  } else if (cond == "a" || cond == "b" || cond == "c") {
    t.declared_condition = cond[0];
  } else {
    doc.fail_key("transport.condition", "expected a, b, c or none");
  }
}

void parse_applied(Document& doc, RunConfig& c) {
  AppliedFieldSpec& f = c.applied;
  const std::string kind = doc.word("applied_field.kind", "none");
  if (kind == "none") {
    f.kind = AppliedFieldSpec::Kind::none;
  } else if (kind == "constant") {
    f.kind = AppliedFieldSpec::Kind::constant;
    f.value = doc.vec3("applied_field.value", Vec3::Zero());
  } else if (kind == "zeeman") {
    f.kind = AppliedFieldSpec::Kind::zeeman;
    f.strength = doc.number("applied_field.strength", 0.0);
  } else if (kind == "ramp") {
    f.kind = AppliedFieldSpec::Kind::ramp;
    f.value = doc.vec3("applied_field.value", Vec3::Zero());
  } else {
    doc.fail_key("applied_field.kind", "expected none, constant, zeeman or ramp");
  }
}

void parse_stepper(Document& doc, RunConfig& c) {
  StepperConfig& s = c.stepper;
  const std::string scheme = doc.word("stepper.scheme", "explicit_rk4");
  if (scheme == "explicit_rk4") {
    s.scheme = Scheme::explicit_rk4;
  } else if (scheme == "imex_euler") {
    s.scheme = Scheme::imex_euler;
  } else {
    doc.fail_key("stepper.scheme", "expected explicit_rk4 or imex_euler");
  }
  s.dt = doc.number("stepper.dt", s.dt);
  s.t_end = doc.number("stepper.t_end", s.t_end);
  s.cfl_safety = doc.number("stepper.cfl_safety", s.cfl_safety);
  s.output_every = int(doc.integer("stepper.output_every", s.output_every));
  s.allow_unstable = doc.boolean("stepper.allow_unstable", s.allow_unstable);
  if (!(s.dt > 0.0)) doc.fail_key("stepper.dt", "must be positive");
  if (!(s.t_end > 0.0)) doc.fail_key("stepper.t_end", "must be positive");
  if (!(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0)) {
    doc.fail_key("stepper.cfl_safety", "must lie in (0, 1]");
  }
  if (s.output_every < 1) doc.fail_key("stepper.output_every", "must be >= 1");
}

void parse_output(Document& doc, RunConfig& c) {
  c.output.cadence = int(doc.integer("output.cadence", c.output.cadence));
  if (c.output.cadence < 1) doc.fail_key("output.cadence", "must be >= 1");
  c.output.vtk = doc.boolean("output.vtk", c.output.vtk);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  Document doc(text);
  RunConfig c;
  c.has_seed = doc.has("seed");
  c.seed = doc.unsigned_integer("seed", 0);
  parse_grid(doc, c);
  parse_material(doc, c);
  parse_initial(doc, c);
  parse_transport(doc, c);
  parse_applied(doc, c);
  parse_stepper(doc, c);
  parse_output(doc, c);
  doc.reject_unused();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

std::string join(const Vec3& v, int n = 3) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  if (c.has_seed) o << "seed = " << c.seed << "\n\n";
  const int d = c.grid.dim;
  o << "[grid]\ndim = " << d << "\nextents = "
    << join(Vec3(c.grid.extents[0], c.grid.extents[1], c.grid.extents[2]), d)
    << "\nresolution = ";
  for (int a = 0; a < d; ++a) o << (a ? ", " : "") << c.grid.resolution[a];
  o << "\n\n";

  const MaterialParams& m = c.material;
  o << "[material]\nsystem = " << to_string(c.system) << "\nalpha = " << format_double(m.alpha)
    << "\nbeta = " << format_double(m.beta) << "\ngamma = " << format_double(m.gamma)
    << "\nepsilon = " << format_double(m.epsilon)
    << "\nanisotropy = " << format_double(m.anisotropy) << "\n\n";

  o << "[initial]\n";
  struct InitialWriter {
    std::ostringstream& o;
    void operator()(const UniformSpec& s) const {
      o << "kind = uniform\ndirection = " << join(s.direction) << "\n";
    }
    void operator()(const HelixSpec& s) const {
      o << "kind = helix\naxis = " << s.axis + 1 << "\nwavenumber = " << format_double(s.wavenumber)
        << "\nbump_amplitude = " << format_double(s.bump_amplitude)
        << "\nbump_center = " << join(s.bump_center)
        << "\nbump_radius = " << format_double(s.bump_radius) << "\n";
    }
    void operator()(const SkyrmionSeedSpec& s) const {
      o << "kind = skyrmion\ncenter = " << join(s.center) << "\nradius = " << format_double(s.radius)
        << "\n";
    }
    void operator()(const RandomUnitSpec&) const { o << "kind = random_unit\n"; }
    void operator()(const StreamFunction2dSpec&) const {
      throw ConfigError("initial: stream2d is not an initial magnetisation");
    }
    void operator()(const RigidRotationSpec&) const {
      throw ConfigError("initial: rigid is not an initial magnetisation");
    }
    void operator()(const CustomSpec&) const {
      throw ConfigError("initial: custom fields cannot be serialised");
    }
  };
  std::visit(InitialWriter{o}, c.initial);
  o << "\n";

  const TransportSpec& t = c.transport;
  o << "[transport]\n";
  switch (t.kind) {
    case TransportSpec::Kind::none:
      o << "kind = none\n";
      break;
    case TransportSpec::Kind::rigid:
      o << "kind = rigid\noffset = " << join(t.offset) << "\nomega = " << join(t.omega) << "\n";
      break;
    case TransportSpec::Kind::stream2d:
      o << "kind = stream2d\namplitude = " << format_double(t.amplitude) << "\n";
      break;
    case TransportSpec::Kind::custom:
      throw ConfigError("transport: custom fields cannot be serialised");
  }
  o << "condition = " << (t.declared_condition == '-' ? std::string("none")
                                                       : std::string(1, t.declared_condition))
    << "\n\n";

  const AppliedFieldSpec& f = c.applied;
  o << "[applied_field]\n";
  switch (f.kind) {
    case AppliedFieldSpec::Kind::none:
      o << "kind = none\n";
      break;
    case AppliedFieldSpec::Kind::constant:
      o << "kind = constant\nvalue = " << join(f.value) << "\n";
      break;
    case AppliedFieldSpec::Kind::zeeman:
      o << "kind = zeeman\nstrength = " << format_double(f.strength) << "\n";
      break;
    case AppliedFieldSpec::Kind::ramp:
      o << "kind = ramp\nvalue = " << join(f.value) << "\n";
      break;
  }
  o << "\n";

  const StepperConfig& s = c.stepper;
  o << "[stepper]\nscheme = " << to_string(s.scheme) << "\ndt = " << format_double(s.dt)
    << "\nt_end = " << format_double(s.t_end) << "\ncfl_safety = " << format_double(s.cfl_safety)
    << "\noutput_every = " << s.output_every
    << "\nallow_unstable = " << (s.allow_unstable ? "true" : "false") << "\n\n";

  o << "[output]\ncadence = " << c.output.cadence << "\nvtk = " << (c.output.vtk ? "true" : "false")
    << "\n";
  return o.str();
}

}  // namespace hllg
