#pragma once

#include <string>

#include "lrsim/event.hpp"

namespace lrsim {

enum class TraceFormat { JsonLines, Csv };

/// One record per event, in processing order. JsonLines keys: time, seq,
/// kind, subject, payload (payload keys in emission order). Csv columns:
/// time,seq,kind,subject,payload with the payload flattened to key=value
/// pairs separated by ';'. Output is byte-stable for identical traces.
std::string emit_trace(const Trace& trace, TraceFormat format);

void write_trace_file(const Trace& trace, const std::string& path, TraceFormat format);

/// Parse a JsonLines trace back into events (payload types preserved).
Trace read_trace(const std::string& text);
Trace read_trace_file(const std::string& path);

}  // namespace lrsim
