#include "lrsim/trace_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lrsim/error.hpp"

namespace lrsim {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json payload_json(const EventPayload& p) {
  ordered_json obj = ordered_json::object();
  for (const auto& [key, value] : p) {
    std::visit([&](const auto& v) { obj[key] = v; }, value);
  }
  return obj;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string emit_trace(const Trace& trace, TraceFormat format) {
  std::ostringstream os;
  if (format == TraceFormat::JsonLines) {
    for (const SimEvent& ev : trace) {
      ordered_json rec;
      rec["time"] = ev.time;
      rec["seq"] = ev.seq;
      rec["kind"] = to_string(ev.kind);
      rec["subject"] = ev.subject;
      rec["payload"] = payload_json(ev.payload);
      os << rec.dump() << '\n';
    }
    return os.str();
  }
  os << "time,seq,kind,subject,payload\n";
  for (const SimEvent& ev : trace) {
    std::string flat;
    for (const auto& [key, value] : ev.payload) {
      if (!flat.empty()) flat += ';';
      flat += key;
      flat += '=';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) flat += v;
            else flat += nlohmann::json(v).dump();
          },
          value);
    }
    os << nlohmann::json(ev.time).dump() << ',' << ev.seq << ',' << to_string(ev.kind)
       << ',' << ev.subject << ',' << csv_quote(flat) << '\n';
  }
  return os.str();
}

void write_trace_file(const Trace& trace, const std::string& path, TraceFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open trace file for writing: " + path);
  out << emit_trace(trace, format);
  if (!out) throw Error(ErrorCode::Io, "failed writing trace file: " + path);
}

Trace read_trace(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json rec = ordered_json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      throw Error(ErrorCode::Io, "trace line " + std::to_string(lineno) + " is not a JSON object");
    SimEvent ev;
    try {
      ev.time = rec.at("time").get<double>();
      ev.seq = rec.at("seq").get<std::uint64_t>();
      const std::string kind = rec.at("kind").get<std::string>();
      auto parsed = event_kind_from_string(kind);
      if (!parsed)
        throw Error(ErrorCode::Io, "trace line " + std::to_string(lineno) +
                                       ": unknown event kind \"" + kind + "\"");
      ev.kind = *parsed;
      ev.subject = rec.at("subject").get<std::string>();
      if (auto it = rec.find("payload"); it != rec.end() && it->is_object()) {
        for (const auto& [key, value] : it->items()) {
          if (value.is_number_integer())
            ev.payload.set(key, value.get<std::int64_t>());
          else if (value.is_number())
            ev.payload.set(key, value.get<double>());
          else if (value.is_string())
            ev.payload.set(key, value.get<std::string>());
          else
            throw Error(ErrorCode::Io, "trace line " + std::to_string(lineno) +
                                           ": unsupported payload value for \"" + key + "\"");
        }
      }
    } catch (const ordered_json::exception& e) {
      throw Error(ErrorCode::Io,
                  "trace line " + std::to_string(lineno) + ": " + e.what());
    }
    trace.push_back(std::move(ev));
  }
  return trace;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_trace(buf.str());
}

}  // namespace lrsim
