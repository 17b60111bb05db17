#pragma once

#include <string>

#include "json.hpp"

#include "kam/analysis.hpp"

namespace kam {

// Top-level keys, in order: config, ranking, evaluations, summary, adequacy.
// Scores are stored at full double precision.
nlohmann::ordered_json report_to_json(const Report &r);

// Pretty-printed JSON document with a trailing newline.
std::string report_json_text(const Report &r);

// Columns rank,dmu,ka_eps,ka0,technically_efficient,kam_efficient in ranking
// order; scores with 6 decimal places.
std::string report_to_csv(const Report &r);

// Self-contained SVG bar chart of KA_eps in ranking order, one labeled bar
// per DMU; KAM-efficient DMUs are drawn in a separate colour.
std::string render_score_chart(const Report &r);

// "%.6f" formatting independent of the global locale.
std::string fixed6(double v);

} // namespace kam
