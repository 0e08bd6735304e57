#include "openconvoy/net/multicast.hpp"

#include <arpa/inet.h>
#include <ifaddrs.h>
#include <net/if.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "openconvoy/errors.hpp"

namespace openconvoy::net {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw TransportError(what + ": " + std::strerror(errno));
}

// Interface for the multicast join: the named one, or the first interface
// that is up with the MULTICAST flag and an IPv6 address (loopback preferred
// when capable, so single-host tests stay off the wire).
unsigned int resolve_interface(const std::string& name) {
    if (!name.empty()) {
        unsigned int index = if_nametoindex(name.c_str());
        if (index == 0) fail("unknown interface '" + name + "'");
        return index;
    }
    ifaddrs* list = nullptr;
    if (getifaddrs(&list) != 0) fail("getifaddrs");
    unsigned int loopback = 0;
    unsigned int other = 0;
    for (ifaddrs* ifa = list; ifa != nullptr; ifa = ifa->ifa_next) {
        if (ifa->ifa_addr == nullptr || ifa->ifa_addr->sa_family != AF_INET6) continue;
        const unsigned int required = IFF_UP | IFF_MULTICAST;
        if ((ifa->ifa_flags & required) != required) continue;
        unsigned int index = if_nametoindex(ifa->ifa_name);
        if (index == 0) continue;
        if (ifa->ifa_flags & IFF_LOOPBACK) {
            if (loopback == 0) loopback = index;
        } else if (other == 0) {
            other = index;
        }
    }
    freeifaddrs(list);
    if (loopback != 0) return loopback;
    if (other != 0) return other;
    throw TransportError("no multicast-capable IPv6 interface found");
}

}  // namespace

std::optional<model::VehicleState> ReceivePipeline::process(
    std::span<const std::uint8_t> bytes) {
    ++counters_.frames_seen;
    if (!gate_.deliver()) {
        ++counters_.dropped_loss;
        return std::nullopt;
    }
    DecodeResult result = decode_bsm(bytes);
    if (const auto* error = std::get_if<DecodeError>(&result)) {
        if (error->kind == DecodeError::Kind::foreign_frame) {
            ++counters_.foreign;
        } else {
            ++counters_.malformed;
        }
        return std::nullopt;
    }
    ++counters_.decoded;
    return std::get<model::VehicleState>(result);
}

MulticastTransport::MulticastTransport(const MulticastConfig& config,
                                       model::VehicleId own_id)
    : own_id_(own_id), group_(config.group), port_(config.port) {
    interface_index_ = resolve_interface(config.interface_name);

    fd_ = ::socket(AF_INET6, SOCK_DGRAM | SOCK_NONBLOCK, 0);
    if (fd_ < 0) fail("socket");

    int on = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &on, sizeof(on));
#ifdef SO_REUSEPORT
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEPORT, &on, sizeof(on));
#endif

    sockaddr_in6 local{};
    local.sin6_family = AF_INET6;
    local.sin6_port = htons(port_);
    local.sin6_addr = in6addr_any;
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&local), sizeof(local)) != 0) {
        int saved = errno;
        ::close(fd_);
        errno = saved;
        fail("bind port " + std::to_string(port_));
    }

    ipv6_mreq membership{};
    if (inet_pton(AF_INET6, group_.c_str(), &membership.ipv6mr_multiaddr) != 1) {
        ::close(fd_);
        throw TransportError("invalid multicast group '" + group_ + "'");
    }
    membership.ipv6mr_interface = interface_index_;
    if (::setsockopt(fd_, IPPROTO_IPV6, IPV6_JOIN_GROUP, &membership,
                     sizeof(membership)) != 0) {
        int saved = errno;
        ::close(fd_);
        errno = saved;
        fail("join group " + group_);
    }

    ::setsockopt(fd_, IPPROTO_IPV6, IPV6_MULTICAST_IF, &interface_index_,
                 sizeof(interface_index_));
    int loop = 1;
    ::setsockopt(fd_, IPPROTO_IPV6, IPV6_MULTICAST_LOOP, &loop, sizeof(loop));
}

MulticastTransport::~MulticastTransport() {
    if (fd_ >= 0) ::close(fd_);
}

void MulticastTransport::send(std::span<const std::uint8_t> frame) {
    sockaddr_in6 dest{};
    dest.sin6_family = AF_INET6;
    dest.sin6_port = htons(port_);
    dest.sin6_scope_id = interface_index_;
    if (inet_pton(AF_INET6, group_.c_str(), &dest.sin6_addr) != 1) {
        throw TransportError("invalid multicast group '" + group_ + "'");
    }
    ssize_t sent = ::sendto(fd_, frame.data(), frame.size(), 0,
                            reinterpret_cast<sockaddr*>(&dest), sizeof(dest));
    if (sent < 0 || static_cast<std::size_t>(sent) != frame.size()) {
        fail("sendto " + group_);
    }
}

std::optional<std::vector<std::uint8_t>> MulticastTransport::read_one() {
    std::uint8_t buffer[1500];
    ssize_t n = ::recvfrom(fd_, buffer, sizeof(buffer), 0, nullptr, nullptr);
    if (n < 0) return std::nullopt;  // EAGAIN or transient error: nothing ready
    std::vector<std::uint8_t> datagram(buffer, buffer + n);
    // Self-filter: well-formed frames carrying our own vehicle id never reach
    // the caller (multicast loop delivers our own transmissions back to us).
    if (datagram.size() == kFrameSize &&
        std::memcmp(datagram.data(), kMagic.data(), kMagic.size()) == 0 &&
        datagram[5] == own_id_) {
        ++self_filtered_;
        return read_one();
    }
    return datagram;
}

std::vector<std::vector<std::uint8_t>> MulticastTransport::poll() {
    std::vector<std::vector<std::uint8_t>> frames;
    while (auto datagram = read_one()) {
        frames.push_back(std::move(*datagram));
    }
    return frames;
}

std::optional<std::vector<std::uint8_t>> MulticastTransport::recv(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    if (::poll(&pfd, 1, timeout_ms) <= 0) return std::nullopt;
    return read_one();
}

bool MulticastTransport::available(const MulticastConfig& config) {
    try {
        MulticastTransport probe(config, 0xFF);
        FrameBytes ping{};  // deliberately foreign-looking, filtered downstream
        probe.send(ping);
        return true;
    } catch (const TransportError&) {
        return false;
    }
}

}  // namespace openconvoy::net
