// SPDX-License-Identifier: Apache-2.0
//
// Message propagation in a tree.  Every node sends exactly one message to
// each neighbour, and only after it has heard from all of its other
// neighbours.  Rooted (collect then distribute) and asynchronous schedules
// are provided; for handlers whose outgoing message depends only on the
// node's own state and its inbox, both produce the same messages.
//
// A propagation is driven by two callables:
//   Msg  send(node, to, inbox)   inbox holds messages from every neighbour
//                                except `to`
//   void finish(node, inbox)     called once per node, after all of its
//                                neighbours have sent to it

#pragma once

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "msbn/core.hpp"

namespace msbn {

class TreeTopology {
 public:
  TreeTopology(std::size_t size,
               const std::vector<std::pair<std::size_t, std::size_t>>& edges)
      : adj_(size) {
    for (auto [a, b] : edges) {
      if (a >= size || b >= size || a == b) {
        throw Error(ErrorKind::kInvalidArgument, "bad tree edge");
      }
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
    for (auto& n : adj_) std::sort(n.begin(), n.end());
    if (edges.size() + 1 != size && size > 0) {
      throw Error(ErrorKind::kInvalidArgument, "not a tree");
    }
    if (size > 0) {
      std::vector<bool> seen(size, false);
      std::vector<std::size_t> q{0};
      seen[0] = true;
      for (std::size_t k = 0; k < q.size(); ++k) {
        for (std::size_t n : adj_[q[k]]) {
          if (!seen[n]) {
            seen[n] = true;
            q.push_back(n);
          }
        }
      }
      if (q.size() != size) throw Error(ErrorKind::kInvalidArgument, "not connected");
    }
  }

  std::size_t size() const { return adj_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t n) const { return adj_.at(n); }

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

template <class Msg>
using Inbox = std::map<std::size_t, const Msg*>;

using DirectedEdge = std::pair<std::size_t, std::size_t>;

template <class Msg>
struct Propagation {
  std::map<DirectedEdge, Msg> messages;
  std::vector<DirectedEdge> send_order;
  std::vector<std::size_t> finish_order;
};

namespace detail {

template <class Msg>
Inbox<Msg> inbox_for(const TreeTopology& t, const Propagation<Msg>& p,
                     std::size_t node, std::size_t except) {
  Inbox<Msg> in;
  for (std::size_t n : t.neighbors(node)) {
    if (n == except) continue;
    auto it = p.messages.find({n, node});
    if (it != p.messages.end()) in.emplace(n, &it->second);
  }
  return in;
}

template <class Msg, class Send>
void send_one(const TreeTopology& t, Propagation<Msg>& p, std::size_t from,
              std::size_t to, Send& send) {
  Inbox<Msg> in = inbox_for(t, p, from, to);
  p.messages.emplace(DirectedEdge{from, to}, send(from, to, in));
  p.send_order.emplace_back(from, to);
}

template <class Msg, class Finish>
void finish_one(const TreeTopology& t, Propagation<Msg>& p, std::size_t node,
                Finish& finish) {
  Inbox<Msg> in = inbox_for(t, p, node, SIZE_MAX);
  finish(node, in);
  p.finish_order.push_back(node);
}

template <class Msg, class Send>
void collect_into(const TreeTopology& t, Propagation<Msg>& p, std::size_t node,
                  std::size_t parent, Send& send) {
  for (std::size_t c : t.neighbors(node)) {
    if (c != parent) collect_into(t, p, c, node, send);
  }
  if (parent != SIZE_MAX) send_one(t, p, node, parent, send);
}

template <class Msg, class Send, class Finish>
void distribute_from(const TreeTopology& t, Propagation<Msg>& p,
                     std::size_t node, std::size_t parent, Send& send,
                     Finish& finish) {
  for (std::size_t c : t.neighbors(node)) {
    if (c == parent) continue;
    send_one(t, p, node, c, send);
    finish_one(t, p, c, finish);
    distribute_from(t, p, c, node, send, finish);
  }
}

}  // namespace detail

// Rooted collect only: every node except the root sends to its parent.
template <class Msg, class Send>
Propagation<Msg> collect_propagate(const TreeTopology& t, std::size_t root,
                                   Send&& send) {
  Propagation<Msg> p;
  detail::collect_into(t, p, root, SIZE_MAX, send);
  return p;
}

// Rooted collect followed by distribute.
template <class Msg, class Send, class Finish>
Propagation<Msg> full_propagate(const TreeTopology& t, std::size_t root,
                                Send&& send, Finish&& finish) {
  Propagation<Msg> p;
  if (t.size() == 0) return p;
  detail::collect_into(t, p, root, SIZE_MAX, send);
  detail::finish_one(t, p, root, finish);
  detail::distribute_from(t, p, root, SIZE_MAX, send, finish);
  return p;
}

// Asynchronous schedule: at each step a uniformly random ready (node,
// neighbour) pair sends.
template <class Msg, class Send, class Finish>
Propagation<Msg> async_full_propagate(const TreeTopology& t, std::uint64_t seed,
                                      Send&& send, Finish&& finish) {
  Propagation<Msg> p;
  std::mt19937_64 rng(seed);
  const std::size_t n = t.size();
  std::vector<std::size_t> received(n, 0);
  std::vector<bool> finished(n, false);
  auto ready = [&](std::size_t from, std::size_t to) {
    if (p.messages.count({from, to})) return false;
    return received[from] + 1 >= t.neighbors(from).size() &&
           (received[from] == t.neighbors(from).size() ||
            !p.messages.count({to, from}));
  };
  std::size_t total = 0;
  for (std::size_t v = 0; v < n; ++v) total += t.neighbors(v).size();
  for (std::size_t v = 0; v < n; ++v) {
    if (t.neighbors(v).empty()) {
      detail::finish_one(t, p, v, finish);
      finished[v] = true;
    }
  }
  while (p.messages.size() < total) {
    std::vector<DirectedEdge> options;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w : t.neighbors(v)) {
        if (ready(v, w)) options.emplace_back(v, w);
      }
    }
    const DirectedEdge e = options[rng() % options.size()];
    detail::send_one(t, p, e.first, e.second, send);
    ++received[e.second];
    for (std::size_t v : {e.first, e.second}) {
      if (!finished[v] && received[v] == t.neighbors(v).size()) {
        detail::finish_one(t, p, v, finish);
        finished[v] = true;
      }
    }
  }
  return p;
}

}  // namespace msbn
