#include "vulnwatch/stream.hpp"

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "vulnwatch/errors.hpp"

namespace vulnwatch {

std::size_t stream_collect(StreamSource& source, std::string_view keyword,
                           const std::filesystem::path& sink,
                           const CollectOptions& options) {
  if (keyword.empty()) throw std::invalid_argument("keyword must be non-empty");
  std::ofstream out(sink, std::ios::app);
  if (!out)
    throw DataError("cannot open sink archive for append: " + sink.string());

  std::size_t appended = 0;
  int consecutive_failures = 0;
  auto backoff = options.initial_backoff;
  for (;;) {
    std::optional<Tweet> post;
    try {
      post = source.next();
    } catch (const StreamInterrupted& e) {
      if (++consecutive_failures > options.max_consecutive_failures)
        throw ExternalServiceError(std::string("stream permanently failed: ") +
                                   e.what());
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
      continue;
    }
    consecutive_failures = 0;
    backoff = options.initial_backoff;
    if (!post) break;
    if (!contains_ci(post->text, keyword)) continue;
    out << tweet_to_line(*post) << '\n';
    out.flush();
    if (!out) throw DataError("append failed: " + sink.string());
    ++appended;
  }
  return appended;
}

// -------------------------------------------------------------------------
// HttpStreamSource: a receiver thread pushes raw lines into a queue that
// next() drains. A connection drop surfaces as StreamInterrupted and the
// next call reconnects.

struct HttpStreamSource::Impl {
  std::string host;
  std::string path;
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::string> lines;
  std::string partial;
  bool done = false;
  bool failed = false;
  std::string error;
  std::thread worker;

  explicit Impl(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
      throw ConfigError("stream endpoint must be an http(s) URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      host = url;
      path = "/";
    } else {
      host = url.substr(0, path_start);
      path = url.substr(path_start);
    }
  }

  void start() {
    {
      std::lock_guard lock(mu);
      done = failed = false;
      error.clear();
      partial.clear();
    }
    worker = std::thread([this] { run(); });
  }

  void run() {
    // Nothing may escape this thread; even a client that cannot be built
    // (e.g. an https endpoint on a build without TLS) must surface through
    // the failed/error channel instead of terminating the process.
    std::string failure;
    try {
      httplib::Client client(host);
      client.set_read_timeout(60, 0);
      httplib::Headers headers;
      if (const char* token = std::getenv("VULNWATCH_STREAM_TOKEN"))
        headers.emplace("Authorization", std::string("Bearer ") + token);

      auto res = client.Get(path, headers,
                            [this](const char* data, size_t len) {
                              on_data(std::string_view(data, len));
                              return true;
                            });
      std::lock_guard lock(mu);
      if (!res || res->status != 200) {
        failed = true;
        error = res ? "stream endpoint returned status " +
                          std::to_string(res->status)
                    : "stream connection failed";
      } else {
        if (!partial.empty()) lines.push_back(std::move(partial));
        done = true;
      }
      cv.notify_all();
      return;
    } catch (const std::exception& e) {
      failure = e.what();
    }
    std::lock_guard lock(mu);
    failed = true;
    error = "stream client: " + failure;
    cv.notify_all();
  }

  void on_data(std::string_view chunk) {
    std::lock_guard lock(mu);
    for (char c : chunk) {
      if (c == '\n') {
        lines.push_back(std::move(partial));
        partial.clear();
      } else {
        partial.push_back(c);
      }
    }
    cv.notify_all();
  }

  void join() {
    if (worker.joinable()) worker.join();
  }
};

HttpStreamSource::HttpStreamSource(std::string url)
    : impl_(std::make_unique<Impl>(url)) {
  impl_->start();
}

HttpStreamSource::~HttpStreamSource() {
  if (impl_) impl_->join();
}

std::optional<Tweet> HttpStreamSource::next() {
  for (;;) {
    std::string line;
    {
      std::unique_lock lock(impl_->mu);
      impl_->cv.wait(lock, [this] {
        return !impl_->lines.empty() || impl_->done || impl_->failed;
      });
      if (!impl_->lines.empty()) {
        line = std::move(impl_->lines.front());
        impl_->lines.pop_front();
      } else if (impl_->failed) {
        const std::string why = impl_->error;
        lock.unlock();
        impl_->join();
        impl_->start();  // reconnect; caller decides whether to retry
        throw StreamInterrupted(why);
      } else {
        impl_->join();
        return std::nullopt;
      }
    }
    if (line.empty()) continue;
    if (auto tweet = tweet_from_line(line)) return tweet;
  }
}

}  // namespace vulnwatch
