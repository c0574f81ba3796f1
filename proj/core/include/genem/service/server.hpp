#pragma once

#include <functional>
#include <memory>

#include "genem/service/service.hpp"

namespace httplib {
class Server;
}

namespace genem::service {

// HTTP routes over a SessionService. Errors use {code, message, stage?}.
std::unique_ptr<httplib::Server> make_server(std::shared_ptr<SessionService> service);

// Binds, prints "listening on <host>:<port>", serves until SIGINT/SIGTERM.
int run(const ServiceConfig& config);

}  // namespace genem::service
