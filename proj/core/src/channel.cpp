#include "axbench/channel.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <mutex>
#include <thread>

#include "axbench/errors.hpp"

extern char** environ;

namespace axbench {
namespace {

constexpr std::size_t kMaxLine = std::size_t{1} << 28;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void close_fd(int fd) {
  if (fd >= 0) ::close(fd);
}

class ChildChannel final : public LineChannel {
 public:
  ChildChannel(pid_t pid, int read_fd, int write_fd, std::string command)
      : pid_(pid), io_(read_fd, write_fd, true, "child process '" + command + "'") {}

  ~ChildChannel() override {
    io_.close_write();
    int status = 0;
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }

  void write_line(std::string_view line) override { io_.write_line(line); }
  ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout) override {
    return io_.read_line(line, timeout);
  }
  void close_write() override { io_.close_write(); }
  std::string describe() const override { return io_.describe(); }

 private:
  pid_t pid_;
  FdChannel io_;
};

}  // namespace

FdChannel::FdChannel(int read_fd, int write_fd, bool owns, std::string description)
    : read_fd_(read_fd), write_fd_(write_fd), owns_(owns), description_(std::move(description)) {
  ignore_sigpipe();
}

FdChannel::~FdChannel() {
  if (!owns_) return;
  if (!write_closed_ && write_fd_ != read_fd_) close_fd(write_fd_);
  close_fd(read_fd_);
}

void FdChannel::write_line(std::string_view line) {
  if (write_closed_) throw ModelError(description_ + ": write after close");
  std::string data(line);
  data += '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(write_fd_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ModelError(description_ + ": " + errno_text("write failed"));
    }
    off += static_cast<std::size_t>(n);
  }
}

ReadStatus FdChannel::read_line(std::string& line, std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  char chunk[65536];
  for (;;) {
    const auto nl = buffer_.find('\n', scanned_);
    if (nl != std::string::npos) {
      line.assign(buffer_, 0, nl);
      buffer_.erase(0, nl + 1);
      scanned_ = 0;
      return ReadStatus::line;
    }
    scanned_ = buffer_.size();
    if (buffer_.size() > kMaxLine) throw ProtocolError(description_ + ": line exceeds the maximum message size");

    int wait_ms = -1;
    if (timeout.count() >= 0) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) return ReadStatus::timeout;
      wait_ms = static_cast<int>(std::min<long long>(left.count(), 1 << 30));
    }
    pollfd pfd{read_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ModelError(description_ + ": " + errno_text("poll failed"));
    }
    if (ready == 0) return ReadStatus::timeout;
    const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      if (errno == ECONNRESET) return ReadStatus::eof;
      throw ModelError(description_ + ": " + errno_text("read failed"));
    }
    if (n == 0) return ReadStatus::eof;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void FdChannel::close_write() {
  if (write_closed_) return;
  write_closed_ = true;
  if (write_fd_ == read_fd_) {
    ::shutdown(write_fd_, SHUT_WR);
  } else if (owns_) {
    close_fd(write_fd_);
  }
}

std::unique_ptr<LineChannel> spawn_child(const std::string& command) {
  ignore_sigpipe();
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) throw ModelError(errno_text("pipe"));
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    close_fd(to_child[0]);
    close_fd(to_child[1]);
    throw ModelError(errno_text("pipe"));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);

  const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  close_fd(to_child[0]);
  close_fd(from_child[1]);
  if (rc != 0) {
    close_fd(to_child[1]);
    close_fd(from_child[0]);
    throw ModelError("cannot start '" + command + "': " + std::strerror(rc));
  }
  return std::make_unique<ChildChannel>(pid, from_child[0], to_child[1], command);
}

std::unique_ptr<LineChannel> connect_tcp(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
    throw ModelError("cannot resolve '" + host + "': " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* a = found; a; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    close_fd(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  const std::string where = host + ":" + service;
  if (fd < 0) throw ModelError("cannot connect to " + where + ": " + std::strerror(errno));
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return std::make_unique<FdChannel>(fd, fd, true, "tcp peer " + where);
}

std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>> channel_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) throw ModelError(errno_text("socketpair"));
  return {std::make_unique<FdChannel>(fds[0], fds[0], true, "socket pair end 0"),
          std::make_unique<FdChannel>(fds[1], fds[1], true, "socket pair end 1")};
}

TcpListener::TcpListener(std::uint16_t port, const std::string& host) {
  fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw ModelError(errno_text("socket"));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    close_fd(fd_);
    throw ContractError("listen address must be an IPv4 literal, got '" + host + "'");
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 8) != 0) {
    const std::string msg = errno_text("bind/listen");
    close_fd(fd_);
    throw ModelError(msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() { close_fd(fd_); }

std::unique_ptr<LineChannel> TcpListener::accept() {
  for (;;) {
    const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd >= 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return std::make_unique<FdChannel>(fd, fd, true, "tcp client on port " + std::to_string(port_));
    }
    if (errno != EINTR) throw ModelError(errno_text("accept"));
  }
}

}  // namespace axbench
