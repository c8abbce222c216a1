#pragma once

// Scripted phantom sessions shared by the session, CLI, service and
// acceptance tests.

#include <json.hpp>

#include "tgcut/graph_cut.hpp"
#include "tgcut/phantom.hpp"
#include "tgcut/session.hpp"

namespace tgcut::scenario {

inline nlohmann::json phantom_script(const PhantomSpec& spec, int z0, int step, double template_scale = 1.5,
                                     const GraphParams& params = {}) {
    nlohmann::json doc = phantom_session_script(spec, z0, step, template_scale);
    doc["events"][0]["params"] = params_to_json(params);
    return doc;
}

} // namespace tgcut::scenario
