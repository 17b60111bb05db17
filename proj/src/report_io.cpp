#include "kam/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace kam {

namespace {

using json = nlohmann::ordered_json;

json factor_json(const FactorVectors &v) {
    return json{{"in", v.in}, {"out", v.out}};
}

json config_json(const KamConfig &c) {
    json eps{{"mode", to_string(c.epsilon.mode)}};
    if (c.epsilon.mode == EpsilonPolicy::Mode::Absolute) {
        eps["in"] = c.epsilon.eps_in;
        eps["out"] = c.epsilon.eps_out;
    } else {
        eps["scale"] = c.epsilon.scale;
    }
    json w{{"mode", to_string(c.weights.mode)}};
    if (c.weights.mode == WeightPolicy::Mode::Explicit) {
        w["in"] = c.weights.w_in;
        w["out"] = c.weights.w_out;
    }
    json delta{{"rule", to_string(c.delta.mode)}};
    if (c.delta.mode == DeltaRule::Mode::Explicit) {
        delta["value"] = c.delta.value;
    }
    return json{{"technology", "VRS"},
                {"epsilon", eps},
                {"weights", w},
                {"delta", delta},
                {"tech_efficiency_tolerance", c.tech_efficiency_tolerance},
                {"score_tolerance", c.score_tolerance}};
}

std::string xml_escape(const std::string &s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&':  out += "&amp;"; break;
            case '<':  out += "&lt;"; break;
            case '>':  out += "&gt;"; break;
            case '"':  out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default:   out += c;
        }
    }
    return out;
}

std::string num(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

} // namespace

std::string fixed6(double v) {
    return num(v, 6);
}

nlohmann::ordered_json report_to_json(const Report &r) {
    json ranking = json::array();
    for (const auto &e : r.ranking) {
        ranking.push_back(json{{"rank", e.rank},
                               {"dmu", e.dmu},
                               {"ka_eps", e.ka_eps},
                               {"ka0", e.ka0},
                               {"technically_efficient", r.evaluations[e.dmu_index].technically_efficient},
                               {"kam_efficient", e.kam_efficient}});
    }

    json evaluations = json::array();
    for (const auto &e : r.evaluations) {
        evaluations.push_back(json{{"dmu", r.dmu_names[e.dmu_index]},
                                   {"index", e.dmu_index},
                                   {"lambda", e.lambda},
                                   {"input_slacks", e.input_slacks},
                                   {"output_slacks", e.output_slacks},
                                   {"target", json{{"inputs", e.target.inputs}, {"outputs", e.target.outputs}}},
                                   {"ka0", e.ka0},
                                   {"ka_eps", e.ka_eps},
                                   {"technically_efficient", e.technically_efficient},
                                   {"kam_efficient", e.kam_efficient},
                                   {"delta", e.delta},
                                   {"neighbor_distance", e.neighbor_distance},
                                   {"zero_objective", e.zero_objective},
                                   {"eps_objective", e.eps_objective},
                                   {"epsilon", factor_json(e.epsilon)},
                                   {"weights", factor_json(e.weights)}});
    }

    json adequacy = json::array();
    for (const auto &a : r.adequacy) {
        adequacy.push_back(json{{"rule", a.rule},
                                {"statement", a.statement},
                                {"threshold", a.threshold},
                                {"n", r.dmu_names.size()},
                                {"passed", a.passed}});
    }

    return json{{"config", config_json(r.config)},
                {"ranking", ranking},
                {"evaluations", evaluations},
                {"summary",
                 json{{"mean", r.summary.mean},
                      {"std", r.summary.std},
                      {"iq_mean", r.summary.iq_mean},
                      {"iq_std", r.summary.iq_std}}},
                {"adequacy", adequacy}};
}

std::string report_json_text(const Report &r) {
    return report_to_json(r).dump(2) + "\n";
}

std::string report_to_csv(const Report &r) {
    std::string out = "rank,dmu,ka_eps,ka0,technically_efficient,kam_efficient\n";
    for (const auto &e : r.ranking) {
        const bool tech = r.evaluations[e.dmu_index].technically_efficient;
        out += std::to_string(e.rank) + ',' + e.dmu + ',' + fixed6(e.ka_eps) + ',' + fixed6(e.ka0) + ',' +
               (tech ? "true" : "false") + ',' + (e.kam_efficient ? "true" : "false") + '\n';
    }
    return out;
}

std::string render_score_chart(const Report &r) {
    const std::size_t count = r.ranking.size();
    constexpr double left = 70.0, right = 20.0, top = 50.0, bottom = 110.0, plot_h = 260.0;
    const double bar_w = 24.0;
    const double gap = 8.0;
    const double plot_w = std::max(360.0, static_cast<double>(count) * (bar_w + gap) + gap);
    const double width = left + plot_w + right;
    const double height = top + plot_h + bottom;

    double lo_score = 1.0;
    double hi_score = 1.0;
    for (const auto &e : r.ranking) {
        lo_score = std::min(lo_score, e.ka_eps);
        hi_score = std::max(hi_score, e.ka_eps);
    }
    // Axis starts at a round tenth below the lowest score so near-1 scores stay distinguishable.
    double axis_lo = lo_score >= 0.5 ? std::floor(lo_score * 10.0) / 10.0 : 0.0;
    if (axis_lo > 0.0 && axis_lo >= lo_score) {
        axis_lo -= 0.1;
    }
    const double axis_hi = hi_score;
    const auto y_of = [&](double v) { return top + plot_h * (1.0 - (v - axis_lo) / (axis_hi - axis_lo)); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width, 0) << "\" height=\"" << num(height, 0)
      << "\" viewBox=\"0 0 " << num(width, 0) << ' ' << num(height, 0) << "\" font-family=\"sans-serif\">\n";
    s << "  <rect x=\"0\" y=\"0\" width=\"" << num(width, 0) << "\" height=\"" << num(height, 0)
      << "\" fill=\"#ffffff\"/>\n";

    std::string title = "KAM efficiency scores (";
    if (r.config.epsilon.mode == EpsilonPolicy::Mode::Proportional) {
        title += "epsilon = " + format_number(r.config.epsilon.scale);
    } else {
        title += "absolute epsilon";
    }
    title += ", " + std::to_string(count) + " DMUs, most to least efficient)";
    s << "  <text x=\"" << num(width / 2.0, 1) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

    constexpr int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double v = axis_lo + (axis_hi - axis_lo) * t / ticks;
        const double y = y_of(v);
        s << "  <line x1=\"" << num(left, 1) << "\" y1=\"" << num(y, 2) << "\" x2=\"" << num(left + plot_w, 1)
          << "\" y2=\"" << num(y, 2) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        s << "  <text x=\"" << num(left - 6.0, 1) << "\" y=\"" << num(y + 4.0, 2)
          << "\" text-anchor=\"end\" font-size=\"11\">" << num(v, 4) << "</text>\n";
    }
    s << "  <line x1=\"" << num(left, 1) << "\" y1=\"" << num(top, 1) << "\" x2=\"" << num(left, 1) << "\" y2=\""
      << num(top + plot_h, 1) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    s << "  <line x1=\"" << num(left, 1) << "\" y1=\"" << num(top + plot_h, 1) << "\" x2=\"" << num(left + plot_w, 1)
      << "\" y2=\"" << num(top + plot_h, 1) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < count; ++i) {
        const auto &e = r.ranking[i];
        const double x = left + gap + static_cast<double>(i) * (bar_w + gap);
        const double y = y_of(e.ka_eps);
        const double h = top + plot_h - y;
        const std::string name = xml_escape(e.dmu);
        s << "  <rect class=\"bar\" data-rank=\"" << e.rank << "\" data-dmu=\"" << name << "\" x=\"" << num(x, 2)
          << "\" y=\"" << num(y, 2) << "\" width=\"" << num(bar_w, 2) << "\" height=\"" << num(h, 2)
          << "\" fill=\"" << (e.kam_efficient ? "#2b7bb9" : "#9db4c8") << "\"><title>" << name << ": "
          << fixed6(e.ka_eps) << "</title></rect>\n";
        const double lx = x + bar_w / 2.0;
        const double ly = top + plot_h + 12.0;
        s << "  <text x=\"" << num(lx, 2) << "\" y=\"" << num(ly, 2) << "\" font-size=\"11\" text-anchor=\"end\" "
          << "transform=\"rotate(-60 " << num(lx, 2) << ' ' << num(ly, 2) << ")\">" << name << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace kam
