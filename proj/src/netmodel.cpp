#include "fonrev/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

namespace fonrev {

namespace {

// Strips a trailing '#' comment and surrounding blanks.
std::string clean_line(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

double parse_double(const std::string& tok, int line, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
  }
}

int parse_int(const std::string& tok, int line, const char* what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size() || v < 0 || v > 1000000) throw std::invalid_argument(tok);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void PhysicsConstants::validate() const {
  if (!(alpha_db_per_km > 0)) throw DomainError("alpha must be positive");
  if (!(span_km > 0)) throw DomainError("span length must be positive");
  if (!(gamma_per_w_km > 0)) throw DomainError("gamma must be positive");
  if (!(beta2_ps2_per_km != 0)) throw DomainError("beta2 must be nonzero");
  if (!(planck > 0) || !(nu_hz > 0)) throw DomainError("h and nu must be positive");
}

double PhysicsConstants::alpha_per_km() const {
  return alpha_db_per_km * std::numbers::ln10 / 10.0;
}

double PhysicsConstants::span_gain() const {
  return std::exp(alpha_per_km() * span_km);
}

double PhysicsConstants::nsp() const { return db_to_linear(nsp_db); }
double PhysicsConstants::eps_x() const { return db_to_linear(eps_x_db); }

double PhysicsConstants::ase_psd_per_span() const {
  // h*nu is J = W/Hz; per GHz multiply by 1e9.
  return (span_gain() - 1.0) * nsp() * planck * nu_hz * 1e9;
}

double PhysicsConstants::mu() const {
  const double pi = std::numbers::pi;
  const double gamma = gamma_per_w_km * 1e-3;         // 1/(W m)
  const double alpha = alpha_per_km() * 1e-3;         // 1/m
  const double beta2 = std::abs(beta2_ps2_per_km) * 1e-27;  // s^2/m
  const double mu_si = 3.0 * gamma * gamma / (2.0 * pi * alpha * beta2);  // (W/Hz)^-2
  return mu_si * 1e-18;
}

double PhysicsConstants::rho() const {
  const double pi = std::numbers::pi;
  const double alpha = alpha_per_km() * 1e-3;
  const double beta2 = std::abs(beta2_ps2_per_km) * 1e-27;
  const double rho_si = pi * pi * beta2 / alpha;  // s^2 = Hz^-2
  return rho_si * 1e18;
}

double dbm_per_ghz_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }
double w_to_dbm_per_ghz(double w) { return 10.0 * std::log10(w * 1000.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// ---------------------------------------------------------------- Network

Network::Network(double spectrum_ghz, double span_km)
    : spectrum_ghz_(spectrum_ghz), span_km_(span_km) {
  if (!(spectrum_ghz > 0)) throw DomainError("spectrum must be positive");
  if (!(span_km > 0)) throw DomainError("span length must be positive");
}

void Network::add_node(NodeId v) {
  if (v < 0) throw DomainError("negative node id");
  if (static_cast<std::size_t>(v) >= adj_.size()) {
    adj_.resize(v + 1);
    present_.resize(v + 1, false);
  }
  if (!present_[v]) {
    present_[v] = true;
    nodes_.insert(std::upper_bound(nodes_.begin(), nodes_.end(), v), v);
  }
}

bool Network::has_node(NodeId v) const {
  return v >= 0 && static_cast<std::size_t>(v) < present_.size() && present_[v];
}

void Network::add_link(NodeId u, NodeId v, double length_km) {
  if (u == v) throw DomainError("self loop at node " + std::to_string(u));
  if (!(length_km > 0) || !std::isfinite(length_km))
    throw DomainError("link length must be positive");
  if (index_.count({u, v}))
    throw DomainError("duplicate link " + std::to_string(u) + "-" + std::to_string(v));
  add_node(u);
  add_node(v);
  int spans = std::max(1, static_cast<int>(std::ceil(length_km / span_km_ - 1e-9)));
  for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
    int idx = static_cast<int>(links_.size());
    links_.push_back({a, b, length_km, spans});
    index_[{a, b}] = idx;
    adj_[a].push_back(idx);
  }
}

std::optional<int> Network::link_index(NodeId u, NodeId v) const {
  auto it = index_.find({u, v});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Network::max_link_length() const {
  double m = 0;
  for (const auto& l : links_) m = std::max(m, l.length_km);
  return m;
}

bool Network::operator==(const Network& o) const {
  if (spectrum_ghz_ != o.spectrum_ghz_ || span_km_ != o.span_km_) return false;
  if (nodes_ != o.nodes_ || links_.size() != o.links_.size()) return false;
  for (const auto& l : links_) {
    auto j = o.link_index(l.from, l.to);
    if (!j) return false;
    const auto& m = o.links_[*j];
    if (m.length_km != l.length_km || m.spans != l.spans) return false;
  }
  return true;
}

Network load_topology(const std::string& text, const TopologyOptions& opt) {
  if (!(opt.length_divisor > 0)) throw DomainError("length divisor must be positive");
  std::istringstream is(text);
  std::optional<Network> net;
  int declared_nodes = -1;
  int lineno = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    std::string line = clean_line(raw);
    if (line.empty()) continue;
    auto tok = split_ws(line);
    if (tok[0] == "F") {
      if (net) throw ParseError(lineno, "repeated F header");
      if (tok.size() != 2) throw ParseError(lineno, "expected 'F <spectrum_ghz>'");
      double f = parse_double(tok[1], lineno, "spectrum");
      if (!(f > 0)) throw ParseError(lineno, "spectrum must be positive");
      net.emplace(f, opt.span_km);
      continue;
    }
    if (tok[0] == "N") {
      if (tok.size() != 2) throw ParseError(lineno, "expected 'N <node_count>'");
      declared_nodes = parse_int(tok[1], lineno, "node count");
      continue;
    }
    if (!net) throw ParseError(lineno, "missing 'F <spectrum_ghz>' header");
    if (tok.size() != 3) throw ParseError(lineno, "expected '<u> <v> <length_km>'");
    int u = parse_int(tok[0], lineno, "node id");
    int v = parse_int(tok[1], lineno, "node id");
    double len = parse_double(tok[2], lineno, "length");
    if (declared_nodes >= 0 && (u >= declared_nodes || v >= declared_nodes))
      throw ParseError(lineno, "unknown node reference");
    if (!(len > 0)) throw ParseError(lineno, "non-positive length");
    if (u == v) throw ParseError(lineno, "self loop");
    if (net->link_index(u, v)) throw ParseError(lineno, "duplicate link");
    net->add_link(u, v, len / opt.length_divisor);
  }
  if (!net) throw ParseError(0, "missing 'F <spectrum_ghz>' header");
  if (declared_nodes >= 0)
    for (int v = 0; v < declared_nodes; ++v) net->add_node(v);
  return std::move(*net);
}

std::string emit_topology(const Network& net) {
  std::ostringstream os;
  os << "F " << fmt(net.spectrum_ghz()) << "\n";
  if (!net.nodes().empty()) os << "N " << net.nodes().back() + 1 << "\n";
  for (const auto& l : net.links())
    if (l.from < l.to) os << l.from << " " << l.to << " " << fmt(l.length_km) << "\n";
  return os.str();
}

// ---------------------------------------------------------------- demands

std::vector<Request> load_demands(const std::string& text, const Network* net) {
  std::vector<Request> out;
  std::istringstream is(text);
  int lineno = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    std::string line = clean_line(raw);
    if (line.empty()) continue;
    auto tok = split_ws(line);
    if (tok.size() != 5)
      throw ParseError(lineno, "expected '<src> <dst> <rate_gbps> <revenue> <psd_dbm_per_ghz>'");
    Request r;
    r.id = static_cast<int>(out.size());
    r.src = parse_int(tok[0], lineno, "source");
    r.dst = parse_int(tok[1], lineno, "destination");
    r.rate_gbps = parse_double(tok[2], lineno, "rate");
    r.revenue = parse_double(tok[3], lineno, "revenue");
    r.psd_w_per_ghz = dbm_per_ghz_to_w(parse_double(tok[4], lineno, "psd"));
    if (r.src == r.dst) throw ParseError(lineno, "source equals destination");
    if (!(r.rate_gbps > 0)) throw ParseError(lineno, "rate must be positive");
    if (!(r.revenue > 0)) throw ParseError(lineno, "revenue must be positive");
    if (net && (!net->has_node(r.src) || !net->has_node(r.dst)))
      throw ParseError(lineno, "unknown node reference");
    out.push_back(r);
  }
  return out;
}

std::string emit_demands(const std::vector<Request>& demands) {
  std::ostringstream os;
  for (const auto& r : demands)
    os << r.src << " " << r.dst << " " << fmt(r.rate_gbps) << " " << fmt(r.revenue) << " "
       << fmt(w_to_dbm_per_ghz(r.psd_w_per_ghz)) << "\n";
  return os.str();
}

// ---------------------------------------------------------------- modes

double TransmissionMode::snr_th_linear() const { return db_to_linear(snr_th_db); }

std::string TransmissionMode::label() const {
  std::ostringstream os;
  os << mf_name << "@" << std::round(fec_oh * 1000.0) / 10.0;
  return os.str();
}

ModeCatalog::ModeCatalog(std::vector<TransmissionMode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw DomainError("empty mode catalog");
  for (std::size_t i = 0; i < modes_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (modes_[i].mf_name == modes_[j].mf_name &&
          std::abs(modes_[i].fec_oh - modes_[j].fec_oh) < 1e-12)
        throw DomainError("duplicate mode " + modes_[i].label());
}

std::vector<std::string> ModeCatalog::mf_names() const {
  std::vector<std::pair<double, std::string>> v;
  for (const auto& m : modes_)
    if (std::none_of(v.begin(), v.end(), [&](auto& p) { return p.second == m.mf_name; }))
      v.emplace_back(m.m_bits, m.mf_name);
  std::stable_sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& p : v) out.push_back(p.second);
  return out;
}

std::vector<double> ModeCatalog::fec_ohs() const {
  std::vector<double> v;
  for (const auto& m : modes_)
    if (std::none_of(v.begin(), v.end(), [&](double o) { return std::abs(o - m.fec_oh) < 1e-12; }))
      v.push_back(m.fec_oh);
  std::sort(v.begin(), v.end());
  return v;
}

const TransmissionMode* ModeCatalog::find(const std::string& mf, double fec_oh) const {
  for (const auto& m : modes_)
    if (m.mf_name == mf && std::abs(m.fec_oh - fec_oh) < 1e-9) return &m;
  return nullptr;
}

const TransmissionMode& ModeCatalog::at(const std::string& mf, double fec_oh) const {
  const auto* m = find(mf, fec_oh);
  if (!m) {
    std::ostringstream os;
    os << "no threshold entry for " << mf << " at " << fec_oh * 100 << "%";
    throw DomainError(os.str());
  }
  return *m;
}

ModeSet ModeCatalog::adaptive_mf(int max_m, double fec_oh) const {
  ModeSet out;
  for (const auto& name : mf_names()) {
    const auto* m = find(name, fec_oh);
    if (m && m->m_bits <= max_m + 1e-12) out.push_back(*m);
  }
  if (out.empty()) throw DomainError("adaptive-format selection is empty");
  return out;
}

ModeSet ModeCatalog::multi_fec(const std::string& mf, double min_oh) const {
  ModeSet out;
  for (double oh : fec_ohs())
    if (oh >= min_oh - 1e-12)
      if (const auto* m = find(mf, oh)) out.push_back(*m);
  if (out.empty()) throw DomainError("multiple-FEC selection is empty");
  return out;
}

namespace {

std::string mf_for_bits(const ModeCatalog& cat, double m) {
  for (const auto& md : cat.modes())
    if (std::abs(md.m_bits - m) < 1e-12) return md.mf_name;
  throw DomainError("no modulation format with m=" + fmt(m));
}

// "PM-QPSK@7" -> (name, 0.07)
std::pair<std::string, double> parse_label(const std::string& s) {
  auto at = s.rfind('@');
  if (at == std::string::npos) throw ParseError(0, "mode label needs '@': " + s);
  std::string oh = s.substr(at + 1);
  if (!oh.empty() && oh.back() == '%') oh.pop_back();
  return {s.substr(0, at), parse_double(oh, 0, "FEC overhead") / 100.0};
}

}  // namespace

ModeSet ModeCatalog::select(const std::string& spec) const {
  if (spec == "all") return modes_;
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError(0, "unknown catalog selector: " + spec);
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "list") {
    ModeSet out;
    std::istringstream is(rest);
    for (std::string item; std::getline(is, item, ',');) {
      auto [name, oh] = parse_label(clean_line(item));
      out.push_back(at(name, oh));
    }
    if (out.empty()) throw DomainError("explicit mode list is empty");
    return out;
  }
  auto c2 = rest.find(':');
  if (c2 == std::string::npos) throw ParseError(0, "selector needs two fields: " + spec);
  double m = parse_double(rest.substr(0, c2), 0, "m");
  double oh = parse_double(rest.substr(c2 + 1), 0, "FEC overhead") / 100.0;
  if (kind == "amf") return adaptive_mf(static_cast<int>(std::lround(m)), oh);
  if (kind == "mfec") return multi_fec(mf_for_bits(*this, m), oh);
  throw ParseError(0, "unknown catalog selector: " + spec);
}

ModeCatalog load_catalog(const std::string& text) {
  std::vector<TransmissionMode> modes;
  std::istringstream is(text);
  int lineno = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    std::string line = clean_line(raw);
    if (line.empty()) continue;
    auto tok = split_ws(line);
    if (tok.size() != 4)
      throw ParseError(lineno, "expected '<mf_name> <m_bits> <oh_percent> <snr_th_db>'");
    TransmissionMode m;
    m.mf_name = tok[0];
    m.m_bits = parse_double(tok[1], lineno, "m_bits");
    m.fec_oh = parse_double(tok[2], lineno, "FEC overhead") / 100.0;
    m.snr_th_db = parse_double(tok[3], lineno, "SNR threshold");
    if (!(m.m_bits > 0)) throw ParseError(lineno, "m_bits must be positive");
    if (!(m.fec_oh >= 0)) throw ParseError(lineno, "FEC overhead must be non-negative");
    for (const auto& p : modes)
      if (p.mf_name == m.mf_name && std::abs(p.fec_oh - m.fec_oh) < 1e-12)
        throw ParseError(lineno, "duplicate mode");
    modes.push_back(m);
  }
  if (modes.empty()) throw ParseError(0, "mode catalog is empty");
  return ModeCatalog(std::move(modes));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace fonrev
