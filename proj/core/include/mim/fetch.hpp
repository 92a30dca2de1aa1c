#pragma once

#include <string>

namespace mim {

// Retrieves the bytes behind a URL. Supports http://host[:port]/path and
// local files (either a plain path or file://path). Throws NetworkError for
// unreachable hosts and non-200 responses, IoError for unreadable files.
std::string fetch_url(const std::string& url, int timeout_seconds = 5);

}  // namespace mim
