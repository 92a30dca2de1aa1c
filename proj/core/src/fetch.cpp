#include "mim/fetch.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"
#include "mim/errors.hpp"

namespace mim {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string fetch_url(const std::string& url, int timeout_seconds) {
    if (url.rfind("file://", 0) == 0) return read_file(url.substr(7));
    if (url.rfind("https://", 0) == 0) {
        throw NetworkError("https is not supported by this toolkit: " + url);
    }
    if (url.rfind("http://", 0) != 0) return read_file(url);

    const std::size_t host_begin = 7;
    const std::size_t path_begin = url.find('/', host_begin);
    const std::string host_port = url.substr(
        host_begin, path_begin == std::string::npos ? std::string::npos
                                                    : path_begin - host_begin);
    const std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);
    if (host_port.empty()) throw NetworkError("bad URL: " + url);

    httplib::Client client("http://" + host_port);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);

    httplib::Result res = client.Get(path);
    if (!res) {
        throw NetworkError("GET " + url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw NetworkError("GET " + url + " returned status " + std::to_string(res->status));
    }
    return res->body;
}

}  // namespace mim
