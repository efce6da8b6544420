#include "lrsim/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lrsim {

namespace {

bool better_id(const ServiceCandidate* a, const ServiceCandidate* b) {
  return a->agent_id < b->agent_id;
}

}  // namespace

const ServiceCandidate* super_choice(const std::vector<ServiceCandidate>& candidates) {
  const ServiceCandidate* best = nullptr;
  for (const ServiceCandidate& c : candidates) {
    if (!c.available) continue;
    if (!best || c.quality_score > best->quality_score ||
        (c.quality_score == best->quality_score && better_id(&c, best)))
      best = &c;
  }
  return best;
}

const ServiceCandidate* nearest_choice(const std::vector<ServiceCandidate>& candidates,
                                       double from_km) {
  const ServiceCandidate* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const ServiceCandidate& c : candidates) {
    if (!c.available) continue;
    const double d = std::abs(c.position_km - from_km);
    if (!best || d < best_d || (d == best_d && better_id(&c, best))) {
      best = &c;
      best_d = d;
    }
  }
  return best;
}

const ServiceCandidate* best_choice(const std::vector<ServiceCandidate>& candidates,
                                    double from_km, double weight_quality) {
  const ServiceCandidate* top = super_choice(candidates);
  const ServiceCandidate* near = nearest_choice(candidates, from_km);
  if (!top || !near) return nullptr;
  // Quality and proximity agreeing on one candidate settles the choice.
  if (top == near) return top;

  double q_min = std::numeric_limits<double>::infinity(), q_max = -q_min;
  double d_min = std::numeric_limits<double>::infinity(), d_max = -d_min;
  for (const ServiceCandidate& c : candidates) {
    if (!c.available) continue;
    q_min = std::min(q_min, c.quality_score);
    q_max = std::max(q_max, c.quality_score);
    const double d = std::abs(c.position_km - from_km);
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
  }

  const ServiceCandidate* best = nullptr;
  double best_score = -1.0;
  for (const ServiceCandidate& c : candidates) {
    if (!c.available) continue;
    const double q = q_max > q_min ? (c.quality_score - q_min) / (q_max - q_min) : 1.0;
    const double d = std::abs(c.position_km - from_km);
    const double p = d_max > d_min ? (d_max - d) / (d_max - d_min) : 1.0;
    const double score = weight_quality * q + (1.0 - weight_quality) * p;
    if (!best || score > best_score || (score == best_score && better_id(&c, best))) {
      best = &c;
      best_score = score;
    }
  }
  return best;
}

const char* to_string(DispatchOutcome o) {
  switch (o) {
    case DispatchOutcome::AssignedDirect: return "assigned";
    case DispatchOutcome::AssignedOnWay: return "assigned_on_way";
    case DispatchOutcome::Transferred: return "transferred";
    case DispatchOutcome::Queued: return "queued";
  }
  return "?";
}

bool is_on_way(const PoliceVanState& van, double incident_km, double corridor_km) {
  if (van.status != Availability::Engaged) return false;
  if (van.active_target_km >= van.route_km) {
    return incident_km >= van.route_km - 1e-9 &&
           incident_km <= van.active_target_km + corridor_km + 1e-9;
  }
  return incident_km <= van.route_km + 1e-9 &&
         incident_km >= van.active_target_km - corridor_km - 1e-9;
}

DispatchDecision van_step(PoliceVanState& van, const HelpRequest& req,
                          double corridor_km) {
  DispatchDecision d;
  d.request_id = req.request_id;
  if (van.status == Availability::Available) {
    van.status = Availability::Engaged;
    van.current_assignment = req.request_id;
    van.active_target_km = req.position_km;
    d.outcome = DispatchOutcome::AssignedDirect;
    d.assignee = van.id;
    return d;
  }
  if (is_on_way(van, req.position_km, corridor_km)) {
    van.itinerary.push_back(req);
    d.outcome = DispatchOutcome::AssignedOnWay;
    d.assignee = van.id;
    return d;
  }
  d.outcome = DispatchOutcome::Transferred;
  return d;
}

DispatchDecision transfer_request(const HelpRequest& req,
                                  std::vector<PoliceVanState>& fleet) {
  PoliceVanState* pick = nullptr;
  double pick_d = std::numeric_limits<double>::infinity();
  for (PoliceVanState& van : fleet) {
    if (van.status != Availability::Available) continue;
    const double d = std::abs(van.route_km - req.position_km);
    if (!pick || d < pick_d || (d == pick_d && van.id < pick->id)) {
      pick = &van;
      pick_d = d;
    }
  }
  if (!pick) {
    DispatchDecision d;
    d.request_id = req.request_id;
    d.outcome = DispatchOutcome::Queued;
    return d;
  }
  return van_step(*pick, req, 0.0);
}

}  // namespace lrsim
