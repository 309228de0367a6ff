#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace axbench {

enum class ReadStatus { line, eof, timeout };

/// Bidirectional newline-delimited byte stream.
class LineChannel {
 public:
  virtual ~LineChannel() = default;

  /// Writes `line` plus '\n'. Throws ModelError if the peer has gone away.
  virtual void write_line(std::string_view line) = 0;
  /// Reads one line without its '\n'. A negative timeout waits forever.
  virtual ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout) = 0;
  /// Signals end of output to the peer.
  virtual void close_write() = 0;
  virtual std::string describe() const = 0;
};

/// Channel over a pair of file descriptors (pipes or one socket).
class FdChannel : public LineChannel {
 public:
  /// The channel closes the descriptors when `owns` is set. read_fd and
  /// write_fd may be equal (sockets).
  FdChannel(int read_fd, int write_fd, bool owns, std::string description);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void write_line(std::string_view line) override;
  ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout) override;
  void close_write() override;
  std::string describe() const override { return description_; }

 private:
  int read_fd_;
  int write_fd_;
  bool owns_;
  bool write_closed_ = false;
  std::string description_;
  std::string buffer_;
  std::size_t scanned_ = 0;
};

/// Runs `sh -c command` with its standard input and output connected to
/// the returned channel. Destroying the channel closes the pipes and reaps
/// the child (killing it if it does not exit within a grace period).
std::unique_ptr<LineChannel> spawn_child(const std::string& command);

/// Connects to host:port over TCP.
std::unique_ptr<LineChannel> connect_tcp(const std::string& host, std::uint16_t port);

/// Two connected in-process channel ends (a socket pair).
std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>> channel_pair();

/// Listening TCP socket; port 0 picks a free port.
class TcpListener {
 public:
  explicit TcpListener(std::uint16_t port = 0, const std::string& host = "127.0.0.1");
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  /// Blocks until a peer connects.
  std::unique_ptr<LineChannel> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace axbench
