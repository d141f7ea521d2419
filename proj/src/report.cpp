#include "mivc/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace mivc {

using nlohmann::json;

std::vector<std::string> labels_of(const TransitionSystem& ts, const ElementIdSet& ids) {
  std::vector<std::string> labels;
  for (ElementId id : ids) labels.push_back(ts.element(id).label);
  std::sort(labels.begin(), labels.end());
  return labels;
}

int AnalysisReport::exit_code() const {
  bool any_unsafe = false;
  bool any_soft = false;
  for (const auto& p : properties) {
    if (p.verdict == "unsafe") any_unsafe = true;
    if (p.verdict == "unknown") any_soft = true;
    if (p.ivc && p.ivc->approximate) any_soft = true;
    if (p.mivcs && !p.mivcs->complete) any_soft = true;
    if (p.mivcs)
      for (const auto& m : p.mivcs->mivcs)
        if (m.approximate) any_soft = true;
    if (p.mcs && !p.mcs->complete) any_soft = true;
    if (p.mcs)
      for (const auto& m : p.mcs->mcs)
        if (m.approximate) any_soft = true;
    if (p.must && p.must->second) any_soft = true;
  }
  if (any_unsafe) return 10;
  if (any_soft) return 20;
  return 0;
}

namespace {

json span_json(const SourceSpan& s) {
  return json{{"line", s.line}, {"column", s.column}, {"begin", s.begin}, {"end", s.end}};
}

json trace_json(const Trace& trace) {
  json steps = json::array();
  for (const auto& step : trace.steps) {
    json frame = json::object();
    for (const auto& [var, value] : step) frame[var] = value_to_string(value);
    steps.push_back(std::move(frame));
  }
  return steps;
}

json set_json(const TransitionSystem& ts, const ElementIdSet& ids) {
  json arr = json::array();
  for (const auto& label : labels_of(ts, ids)) arr.push_back(label);
  return arr;
}

}  // namespace

std::string render_json(const AnalysisReport& report) {
  const TransitionSystem& ts = *report.ts;
  json doc;
  doc["tool"] = "mivc-kit";
  doc["file"] = report.file;
  doc["main"] = report.main_node;
  doc["command"] = report.command;
  doc["solver"] = json{{"command", report.solver_command},
                       {"name", report.solver_name},
                       {"version", report.solver_version}};
  doc["config"] = report.config;

  json elements = json::array();
  for (ElementId id : report.universe) {
    const Element& e = ts.element(id);
    elements.push_back(json{{"id", e.id},
                            {"label", e.label},
                            {"kind", element_kind_name(e.kind)},
                            {"span", span_json(e.span)}});
  }
  doc["elements"] = std::move(elements);

  json props = json::array();
  for (const auto& p : report.properties) {
    json pj;
    pj["property"] = p.property;
    pj["verdict"] = p.verdict;
    if (p.verdict == "safe" && p.k >= 0) pj["k"] = p.k;
    if (p.trace) pj["trace"] = trace_json(*p.trace);
    if (p.ivc) {
      pj["ivc"] = json{{"mode", p.ivc_mode},
                       {"elements", set_json(ts, p.ivc->elements)},
                       {"approximate", p.ivc->approximate}};
    }
    if (p.mivcs) {
      json list = json::array();
      json flags = json::array();
      for (const auto& m : p.mivcs->mivcs) {
        list.push_back(set_json(ts, m.elements));
        flags.push_back(m.approximate);
      }
      pj["mivcs"] = std::move(list);
      pj["mivcs_approximate"] = std::move(flags);
      pj["mivcs_complete"] = p.mivcs->complete;
      pj["must_seed"] = set_json(ts, p.mivcs->must);
    }
    if (p.mcs) {
      json list = json::array();
      json flags = json::array();
      for (const auto& m : p.mcs->mcs) {
        list.push_back(set_json(ts, m.elements));
        flags.push_back(m.approximate);
      }
      pj["mcs"] = std::move(list);
      pj["mcs_approximate"] = std::move(flags);
      pj["mcs_complete"] = p.mcs->complete;
      if (p.mcs_bound >= 0) pj["mcs_bound"] = p.mcs_bound;
    }
    if (p.must) {
      pj["must"] = json{{"elements", set_json(ts, p.must->first)},
                        {"approximate", p.must->second}};
    }
    if (p.categorization) {
      pj["categorization"] = json{{"must", set_json(ts, p.categorization->must)},
                                  {"may", set_json(ts, p.categorization->may)},
                                  {"irr", set_json(ts, p.categorization->irr)}};
    }
    json timing = json::object();
    for (const auto& [phase, ms] : p.timing_ms) timing[phase] = ms;
    pj["timing_ms"] = std::move(timing);
    if (!p.note.empty()) pj["note"] = p.note;
    props.push_back(std::move(pj));
  }
  doc["properties"] = std::move(props);
  doc["exit_code"] = report.exit_code();
  return doc.dump(2) + "\n";
}

namespace {

void render_set_lines(std::ostream& os, const TransitionSystem& ts, const ElementIdSet& ids,
                      const char* indent) {
  for (const auto& label : labels_of(ts, ids)) {
    auto id = ts.find_element(label);
    os << indent << label;
    if (id) os << "  (" << element_kind_name(ts.element(*id).kind) << " at "
               << ts.element(*id).span.describe() << ")";
    os << "\n";
  }
}

void render_trace_text(std::ostream& os, const Trace& trace) {
  for (size_t t = 0; t < trace.steps.size(); ++t) {
    os << "    step " << t << ":\n";
    for (const auto& [var, value] : trace.steps[t]) {
      if (var.rfind("cut!", 0) == 0) continue;
      os << "      " << var << " = " << value_to_string(value) << "\n";
    }
  }
}

}  // namespace

std::string render_text(const AnalysisReport& report) {
  const TransitionSystem& ts = *report.ts;
  std::ostringstream os;
  os << "mivc-kit " << report.command << " " << report.file << " (main: " << report.main_node
     << ")\n";
  os << "solver: " << report.solver_name
     << (report.solver_version.empty() ? "" : " " + report.solver_version) << " via `"
     << report.solver_command << "`\n";
  os << "selected elements: " << report.universe.size() << "\n";

  for (const auto& p : report.properties) {
    os << "\nproperty " << p.property << ": " << p.verdict;
    if (p.verdict == "safe" && p.k >= 0) os << " (k=" << p.k << ")";
    os << "\n";
    if (p.trace) {
      os << "  counterexample (" << p.trace->steps.size() << " steps):\n";
      render_trace_text(os, *p.trace);
    }
    if (p.ivc) {
      os << "  " << (p.ivc->approximate ? "approximate " : "") << p.ivc_mode << " IVC ("
         << p.ivc->elements.size() << " elements):\n";
      render_set_lines(os, ts, p.ivc->elements, "    ");
    }
    if (p.mivcs) {
      os << "  MIVCs: " << p.mivcs->mivcs.size()
         << (p.mivcs->complete ? " (complete)" : " (approximate)") << "\n";
      for (size_t i = 0; i < p.mivcs->mivcs.size(); ++i) {
        os << "    MIVC " << i + 1 << " (" << p.mivcs->mivcs[i].elements.size() << " elements"
           << (p.mivcs->mivcs[i].approximate ? ", approximate" : "") << "):\n";
        render_set_lines(os, ts, p.mivcs->mivcs[i].elements, "      ");
      }
    }
    if (p.mcs) {
      os << "  MCSs: " << p.mcs->mcs.size()
         << (p.mcs->complete ? " (complete)" : " (approximate)");
      if (p.mcs_bound >= 0) os << " up to cardinality " << p.mcs_bound;
      os << "\n";
      // grouped by cardinality
      size_t max_card = 0;
      for (const auto& m : p.mcs->mcs) max_card = std::max(max_card, m.elements.size());
      for (size_t card = 0; card <= max_card; ++card) {
        for (const auto& m : p.mcs->mcs) {
          if (m.elements.size() != card) continue;
          os << "    {";
          bool first = true;
          for (const auto& label : labels_of(ts, m.elements)) {
            if (!first) os << ", ";
            os << label;
            first = false;
          }
          os << "}" << (m.approximate ? "  (approximate)" : "") << "\n";
        }
      }
    }
    if (p.must) {
      os << "  MUST set (" << p.must->first.size() << " elements"
         << (p.must->second ? ", underapproximation" : "") << "):\n";
      render_set_lines(os, ts, p.must->first, "    ");
    }
    if (p.categorization) {
      os << "  categorization: MUST=" << p.categorization->must.size()
         << " MAY=" << p.categorization->may.size() << " IRR=" << p.categorization->irr.size()
         << "\n";
      os << "    MUST:\n";
      render_set_lines(os, ts, p.categorization->must, "      ");
      os << "    MAY:\n";
      render_set_lines(os, ts, p.categorization->may, "      ");
      os << "    IRR:\n";
      render_set_lines(os, ts, p.categorization->irr, "      ");
    }
    if (!p.note.empty()) os << "  note: " << p.note << "\n";
    for (const auto& [phase, ms] : p.timing_ms) os << "  time[" << phase << "] = " << ms << " ms\n";
  }
  os << "\nexit code: " << report.exit_code() << "\n";
  return os.str();
}

// --- schema validation ------------------------------------------------------

namespace {

bool type_matches(const json& instance, const std::string& type) {
  if (type == "object") return instance.is_object();
  if (type == "array") return instance.is_array();
  if (type == "string") return instance.is_string();
  if (type == "integer") return instance.is_number_integer();
  if (type == "number") return instance.is_number();
  if (type == "boolean") return instance.is_boolean();
  if (type == "null") return instance.is_null();
  return false;
}

std::optional<std::string> validate(const json& schema, const json& instance,
                                    const std::string& path) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    if (t.is_string()) {
      if (!type_matches(instance, t.get<std::string>()))
        return path + ": expected type " + t.get<std::string>();
    } else if (t.is_array()) {
      bool ok = false;
      for (const auto& alt : t)
        if (type_matches(instance, alt.get<std::string>())) ok = true;
      if (!ok) return path + ": value matches none of the allowed types";
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& alt : schema["enum"])
      if (alt == instance) ok = true;
    if (!ok) return path + ": value not in enum";
  }
  if (instance.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"])
        if (!instance.contains(key.get<std::string>()))
          return path + ": missing required key '" + key.get<std::string>() + "'";
    }
    const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
    for (auto it = instance.begin(); it != instance.end(); ++it) {
      if (props && props->contains(it.key())) {
        auto err = validate((*props)[it.key()], it.value(), path + "/" + it.key());
        if (err) return err;
      } else if (schema.contains("additionalProperties")) {
        const auto& ap = schema["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>())
          return path + ": unexpected key '" + it.key() + "'";
        if (ap.is_object()) {
          auto err = validate(ap, it.value(), path + "/" + it.key());
          if (err) return err;
        }
      }
    }
  }
  if (instance.is_array() && schema.contains("items")) {
    for (size_t i = 0; i < instance.size(); ++i) {
      auto err = validate(schema["items"], instance[i], path + "/" + std::to_string(i));
      if (err) return err;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_against_schema(const std::string& schema_json,
                                                   const std::string& document_json) {
  json schema = json::parse(schema_json, nullptr, /*allow_exceptions=*/false);
  if (schema.is_discarded()) return "schema is not valid JSON";
  json doc = json::parse(document_json, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return "document is not valid JSON";
  return validate(schema, doc, "");
}

}  // namespace mivc
