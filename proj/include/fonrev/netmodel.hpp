#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fonrev/error.hpp"

namespace fonrev {

using NodeId = int;

// Fiber/amplifier/OXC constants. Defaults are the reference parameter set.
struct PhysicsConstants {
  double alpha_db_per_km = 0.2;
  double beta2_ps2_per_km = -21.7;
  double gamma_per_w_km = 1.3;
  double planck = 6.62607015e-34;
  double nu_hz = 192.5e12;
  double nsp_db = 7.0;
  double eps_x_db = -25.0;
  double span_km = 100.0;

  void validate() const;

  // Linear power attenuation per km.
  double alpha_per_km() const;
  // e^(alpha L_span)
  double span_gain() const;
  double nsp() const;
  double eps_x() const;
  // ASE PSD added by one span, W/GHz.
  double ase_psd_per_span() const;
  // mu in (W/GHz)^-2, rho in GHz^-2. Both use |beta2|.
  double mu() const;
  double rho() const;
};

double dbm_per_ghz_to_w(double dbm);
double w_to_dbm_per_ghz(double w);
double db_to_linear(double db);
double linear_to_db(double lin);

struct Link {
  NodeId from = 0;
  NodeId to = 0;
  double length_km = 0;
  int spans = 0;
};

class Network {
 public:
  Network(double spectrum_ghz, double span_km = 100.0);

  // Adds u->v and v->u. Throws DomainError on bad input or a duplicate.
  void add_link(NodeId u, NodeId v, double length_km);
  // Declares a node without links (optional; links declare their ends).
  void add_node(NodeId v);

  double spectrum_ghz() const { return spectrum_ghz_; }
  double span_km() const { return span_km_; }
  int node_count() const { return static_cast<int>(adj_.size()); }
  bool has_node(NodeId v) const;
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  int link_count() const { return static_cast<int>(links_.size()); }
  std::optional<int> link_index(NodeId u, NodeId v) const;
  // Outgoing link indices of v.
  const std::vector<int>& out_links(NodeId v) const { return adj_.at(v); }
  // N(v): number of adjacent nodes.
  int degree(NodeId v) const { return static_cast<int>(adj_.at(v).size()); }
  double max_link_length() const;

  bool operator==(const Network& o) const;

 private:
  double spectrum_ghz_;
  double span_km_;
  std::vector<NodeId> nodes_;  // sorted
  std::vector<Link> links_;
  std::vector<std::vector<int>> adj_;  // indexed by node id
  std::vector<bool> present_;
  std::map<std::pair<NodeId, NodeId>, int> index_;
};

struct TopologyOptions {
  double span_km = 100.0;
  // Lengths in the file are divided by this (the large reference
  // topologies are shrunk so that high-order formats can reach).
  double length_divisor = 1.0;
};

Network load_topology(const std::string& text, const TopologyOptions& opt = {});
std::string emit_topology(const Network& net);

struct Request {
  int id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double rate_gbps = 0;
  double revenue = 0;
  double psd_w_per_ghz = 0;
};

// net, when given, is used to reject unknown node references.
std::vector<Request> load_demands(const std::string& text,
                                  const Network* net = nullptr);
std::string emit_demands(const std::vector<Request>& demands);

struct TransmissionMode {
  std::string mf_name;
  double m_bits = 0;
  double fec_oh = 0;  // fraction, 0.07 for 7%
  double snr_th_db = 0;

  double se() const { return m_bits / (1.0 + fec_oh); }
  double snr_th_linear() const;
  // e.g. "PM-QPSK@20"
  std::string label() const;
};

inline double mode_se(const TransmissionMode& m) { return m.se(); }

using ModeSet = std::vector<TransmissionMode>;

// Full threshold table: every (format, FEC) row of a mode-catalog file.
class ModeCatalog {
 public:
  explicit ModeCatalog(std::vector<TransmissionMode> modes);

  const ModeSet& modes() const { return modes_; }
  // Distinct formats ordered by m_bits, FEC overheads ascending.
  std::vector<std::string> mf_names() const;
  std::vector<double> fec_ohs() const;

  const TransmissionMode* find(const std::string& mf, double fec_oh) const;
  const TransmissionMode& at(const std::string& mf, double fec_oh) const;

  // Adaptive formats: every format with m_bits <= max_m at one FEC.
  ModeSet adaptive_mf(int max_m, double fec_oh) const;
  // Multiple FEC: one format, every FEC overhead with oh >= min_oh.
  ModeSet multi_fec(const std::string& mf, double min_oh) const;
  // Selector grammar:
  //   all
  //   amf:<max_m>:<oh%>         adaptive formats at one FEC
  //   mfec:<m>:<min_oh%>        one format, FECs from min_oh up
  //   list:PM-QPSK@7,PM-BPSK@7  explicit subset, in the given order
  ModeSet select(const std::string& spec) const;

 private:
  ModeSet modes_;
};

ModeCatalog load_catalog(const std::string& text);
std::string read_file(const std::string& path);

}  // namespace fonrev
