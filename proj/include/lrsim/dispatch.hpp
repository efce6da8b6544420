#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lrsim/agents.hpp"

namespace lrsim {

/// A help-service offer flattened for selection: anything along the route
/// (rest area, fuel station, workshop, medical unit) scored the same way.
struct ServiceCandidate {
  AgentId agent_id;
  std::string kind;
  double position_km = 0.0;
  double quality_score = 0.0;
  bool available = true;
};

/// Highest quality among available candidates; ties go to the smaller id.
const ServiceCandidate* super_choice(const std::vector<ServiceCandidate>& candidates);

/// Closest to from_km among available candidates; ties go to the smaller id.
const ServiceCandidate* nearest_choice(const std::vector<ServiceCandidate>& candidates,
                                       double from_km);

/// Preferred service: when some candidate is both top-quality and nearest,
/// take it. Otherwise blend the two criteria - min-max normalize quality and
/// proximity over the available set and rank by
/// weight_quality * q + (1 - weight_quality) * p. A dimension with no spread
/// counts full for everyone. Ties go to the smaller id.
const ServiceCandidate* best_choice(const std::vector<ServiceCandidate>& candidates,
                                    double from_km, double weight_quality);

enum class DispatchOutcome { AssignedDirect, AssignedOnWay, Transferred, Queued };
const char* to_string(DispatchOutcome o);

struct DispatchDecision {
  std::string request_id;
  DispatchOutcome outcome = DispatchOutcome::Queued;
  std::optional<AgentId> assignee;
};

/// Whether a new incident sits along the van's current direction of travel:
/// between the van and its active target, or past the target by at most
/// corridor_km. Incidents behind the van never qualify.
bool is_on_way(const PoliceVanState& van, double incident_km, double corridor_km);

/// One step of the van's duty cycle. An available van engages directly; an
/// engaged van absorbs the request into its itinerary when the incident is
/// on its way, and otherwise hands it back for transfer.
DispatchDecision van_step(PoliceVanState& van, const HelpRequest& req,
                          double corridor_km);

/// Reassign to the nearest available van in the fleet (ties to the smaller
/// id); with every van busy the request is queued.
DispatchDecision transfer_request(const HelpRequest& req,
                                  std::vector<PoliceVanState>& fleet);

}  // namespace lrsim
