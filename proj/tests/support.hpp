#pragma once

// Builders shared by the unit tests.

#include <cstdint>
#include <string>
#include <vector>

#include "snc/snc.hpp"

namespace snc::support {

inline Timestamp at(const std::string& iso) { return *parse_timestamp(iso); }

inline Record make_record(const std::string& source, const std::string& id, Timestamp ts,
                          std::string text, Platform platform = Platform::telegram,
                          std::string event = "ev") {
    Record r;
    r.platform = platform;
    r.event_id = std::move(event);
    r.source = source;
    r.record_id = id;
    r.timestamp = ts;
    r.text = std::move(text);
    corpus::finalize(r);
    return r;
}

inline SourceSlice make_slice(const std::string& source, const std::vector<std::string>& texts,
                              Platform platform = Platform::telegram,
                              Timestamp start = Timestamp{std::chrono::hours{24 * 20000}},
                              std::chrono::seconds step = std::chrono::hours{1}) {
    SourceSlice s;
    s.event_id = "ev";
    s.platform = platform;
    s.source = source;
    for (std::size_t i = 0; i < texts.size(); ++i)
        s.records.push_back(make_record(source, std::to_string(i + 1),
                                        start + step * static_cast<int>(i), texts[i], platform));
    return s;
}

inline SourceSlice slice_at(const std::string& source, const std::vector<Timestamp>& times,
                            Platform platform = Platform::telegram) {
    SourceSlice s;
    s.event_id = "ev";
    s.platform = platform;
    s.source = source;
    for (std::size_t i = 0; i < times.size(); ++i)
        s.records.push_back(make_record(source, std::to_string(i + 1), times[i],
                                        "message number " + std::to_string(i), platform));
    return s;
}

}  // namespace snc::support
