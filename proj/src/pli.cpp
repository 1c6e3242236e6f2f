#include "fonrev/pli.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fonrev {

Route make_route(const Network& net, const std::vector<NodeId>& nodes) {
  if (nodes.size() < 2) throw DomainError("route needs at least two nodes");
  Route r;
  r.nodes = nodes;
  std::set<NodeId> seen;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!seen.insert(nodes[k]).second)
      throw DomainError("route repeats node " + std::to_string(nodes[k]));
    if (k == 0) continue;
    auto li = net.link_index(nodes[k - 1], nodes[k]);
    if (!li)
      throw DomainError("route hop " + std::to_string(nodes[k - 1]) + "->" +
                        std::to_string(nodes[k]) + " is not a link");
    r.links.push_back(*li);
    r.spans += net.links()[*li].spans;
    r.length_km += net.links()[*li].length_km;
  }
  return r;
}

double PliBreakdown::snr_db() const { return linear_to_db(snr_linear()); }

ImpairmentModel::ImpairmentModel(const PhysicsConstants& pc) : pc_(pc) {
  pc_.validate();
  mu_ = pc_.mu();
  rho_ = pc_.rho();
  eps_x_ = pc_.eps_x();
  ase_ = pc_.ase_psd_per_span();
}

double ImpairmentModel::ase_nsr(int spans, double psd) const {
  if (spans < 0) throw DomainError("negative span count");
  if (!(psd > 0)) throw DomainError("PSD must be positive");
  return spans * ase_ / psd;
}

double ImpairmentModel::sci_nsr(int spans, double psd, double width_ghz) const {
  if (spans < 0) throw DomainError("negative span count");
  if (!(psd > 0)) throw DomainError("PSD must be positive");
  if (!(width_ghz > 0)) throw DomainError("channel width must be positive");
  return spans * mu_ * psd * psd * std::asinh(rho_ * width_ghz * width_ghz);
}

double ImpairmentModel::xci_nsr(int shared_spans, double psd_j, double gap_ghz,
                                double width_j) const {
  if (shared_spans == 0) return 0.0;
  double lo = gap_ghz - 0.5 * width_j;
  if (!(lo > 0)) throw DomainError("XCI evaluated for overlapping channels");
  return shared_spans * mu_ * psd_j * psd_j * std::log((gap_ghz + 0.5 * width_j) / lo);
}

double ImpairmentModel::ad_nsr(int nodes, double overlap, double psd_i, double width_i,
                               double psd_j) const {
  if (nodes == 0 || overlap <= 0) return 0.0;
  return nodes * eps_x_ * overlap * psd_j / (width_i * psd_i);
}

double overlap_ghz(const Channel& a, const Channel& b) {
  double v = 0.5 * (a.width() + b.width()) - std::abs(a.center() - b.center());
  return std::clamp(v, 0.0, std::min(a.width(), b.width()));
}

int first_shared_link(const Route& a, const Route& b) {
  for (int l : a.links)
    if (std::find(b.links.begin(), b.links.end(), l) != b.links.end()) return l;
  return -1;
}

int shared_spans(const Route& a, const Route& b, const Network& net) {
  int s = 0;
  for (int l : a.links)
    if (std::find(b.links.begin(), b.links.end(), l) != b.links.end())
      s += net.links()[l].spans;
  return s;
}

int ad_qualifying_nodes(const Route& primary, const Route& interferer) {
  if (primary.empty() || interferer.empty()) return 0;
  int n = 0;
  // Primary leaves every node but its last; interferer enters every node but its first.
  for (std::size_t k = 0; k + 1 < primary.nodes.size(); ++k) {
    NodeId v = primary.nodes[k];
    auto it = std::find(interferer.nodes.begin(), interferer.nodes.end(), v);
    if (it != interferer.nodes.end() && it != interferer.nodes.begin()) ++n;
  }
  return n;
}

namespace {

[[noreturn]] void plan_violation(const Assignment& p, const Assignment& q, int link,
                                 const Network& net) {
  std::ostringstream os;
  os << "requests " << p.request.id << " and " << q.request.id
     << " overlap or touch on link " << net.links()[link].from << "->"
     << net.links()[link].to << " ([" << p.channel.begin_ghz << ", " << p.channel.end_ghz
     << "] vs [" << q.channel.begin_ghz << ", " << q.channel.end_ghz << "] GHz)";
  throw PlanError(p.request.id, q.request.id, link, os.str());
}

}  // namespace

double xci_nsr(const ImpairmentModel& m, const Assignment& primary,
               const Assignment& interferer, const Network& net) {
  int link = first_shared_link(primary.route, interferer.route);
  if (link < 0) return 0.0;
  double gap = std::abs(primary.channel.center() - interferer.channel.center());
  double w_i = primary.channel.width(), w_j = interferer.channel.width();
  if (!(gap > 0.5 * (w_i + w_j))) plan_violation(primary, interferer, link, net);
  return m.xci_nsr(shared_spans(primary.route, interferer.route, net),
                   interferer.request.psd_w_per_ghz, gap, w_j);
}

double ad_xt_nsr(const ImpairmentModel& m, const Assignment& primary,
                 const Assignment& interferer, const Network&) {
  double ov = overlap_ghz(primary.channel, interferer.channel);
  if (ov <= 0) return 0.0;
  return m.ad_nsr(ad_qualifying_nodes(primary.route, interferer.route), ov,
                  primary.request.psd_w_per_ghz, primary.channel.width(),
                  interferer.request.psd_w_per_ghz);
}

std::vector<std::optional<PliBreakdown>> evaluate(const ImpairmentModel& m,
                                                  const std::vector<Assignment>& all,
                                                  const Network& net) {
  std::vector<std::optional<PliBreakdown>> out(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& a = all[i];
    if (!a.accepted) continue;
    PliBreakdown b;
    double psd = a.request.psd_w_per_ghz;
    b.t_ase = m.ase_nsr(a.route.spans, psd);
    b.t_sci = m.sci_nsr(a.route.spans, psd, a.channel.width());
    b.below_validity_floor = a.channel.width() < kValidityFloorGhz;
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (j == i || !all[j].accepted) continue;
      b.t_xci += xci_nsr(m, a, all[j], net);
      b.t_ad += ad_xt_nsr(m, a, all[j], net);
    }
    out[i] = b;
  }
  return out;
}

std::vector<QotVerdict> qot_ok(const ImpairmentModel& m, const std::vector<Assignment>& all,
                               const Network& net, double threshold_offset_db) {
  auto br = evaluate(m, all, net);
  std::vector<QotVerdict> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!br[i]) continue;
    QotVerdict v;
    v.index = static_cast<int>(i);
    v.snr_db = br[i]->snr_db();
    v.required_db = all[i].mode.snr_th_db + threshold_offset_db;
    v.ok = v.snr_db >= v.required_db - 1e-12;
    out.push_back(v);
  }
  return out;
}

}  // namespace fonrev
