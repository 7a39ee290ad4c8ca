#include "pql/generate.hpp"

#include <algorithm>

namespace pql {

namespace {

struct Draft {
  std::size_t places = 2;  // 0 is the source, 1 the sink
  std::vector<std::vector<std::size_t>> pre, post;

  std::size_t add_place() { return places++; }
  std::size_t add_transition(std::vector<std::size_t> in, std::vector<std::size_t> out) {
    pre.push_back(std::move(in));
    post.push_back(std::move(out));
    return pre.size() - 1;
  }
  void redirect_consumers(std::size_t from, std::size_t to) {
    for (auto& in : pre) std::replace(in.begin(), in.end(), from, to);
  }
};

}  // namespace

NetSystem random_sound_net(std::mt19937_64& rng, const GeneratorOptions& options) {
  Draft d;
  d.add_transition({0}, {1});
  std::uniform_int_distribution<std::size_t> size_dist(1, std::max<std::size_t>(1, options.max_transitions));
  auto target = size_dist(rng);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  for (int attempts = 0; d.pre.size() < target && attempts < 200; ++attempts) {
    auto rule = pick(options.cyclic ? 6 : 5);
    auto room_t = options.max_transitions - d.pre.size();
    auto room_p = options.max_places - d.places;
    switch (rule) {
      case 0: {  // t becomes t; t'
        if (room_t < 1 || room_p < 1) break;
        auto t = pick(d.pre.size());
        auto p = d.add_place();
        auto out = d.post[t];
        d.post[t] = {p};
        d.add_transition({p}, out);
        break;
      }
      case 1: {  // p becomes p -> t -> p'
        if (room_t < 1 || room_p < 1) break;
        auto p = pick(d.places);
        if (p == 1) break;
        auto q = d.add_place();
        d.redirect_consumers(p, q);
        d.add_transition({p}, {q});
        break;
      }
      case 2: {  // choice: duplicate a transition
        if (room_t < 1) break;
        auto t = pick(d.pre.size());
        d.add_transition(d.pre[t], d.post[t]);
        break;
      }
      case 3:
      case 4: {  // parallel branch: duplicate an inner place, then refine the copy
        if (room_t < 1 || room_p < 2) break;
        auto p = pick(d.places);
        if (p < 2) break;
        auto copy = d.add_place();
        for (std::size_t t = 0; t < d.pre.size(); ++t) {
          if (std::find(d.pre[t].begin(), d.pre[t].end(), p) != d.pre[t].end()) d.pre[t].push_back(copy);
          if (std::find(d.post[t].begin(), d.post[t].end(), p) != d.post[t].end()) d.post[t].push_back(copy);
        }
        auto q = d.add_place();
        d.redirect_consumers(copy, q);
        d.add_transition({copy}, {q});
        break;
      }
      case 5: {  // loop p -> q -> p
        if (room_t < 2 || room_p < 1) break;
        auto p = pick(d.places);
        if (p < 2) break;
        auto q = d.add_place();
        d.add_transition({p}, {q});
        d.add_transition({q}, {p});
        break;
      }
    }
  }

  NetBuilder b;
  auto place_id = [](std::size_t p) {
    return p == 0 ? std::string("i") : p == 1 ? std::string("o") : "p" + std::to_string(p - 1);
  };
  for (std::size_t p = 0; p < d.places; ++p) b.place(place_id(p), p == 0 ? 1 : 0);
  std::bernoulli_distribution silent(options.silent_ratio);
  for (std::size_t t = 0; t < d.pre.size(); ++t) {
    auto id = "t" + std::to_string(t + 1);
    std::string label;
    if (!options.alphabet.empty() && !silent(rng)) label = options.alphabet[pick(options.alphabet.size())];
    b.transition(id, label);
    for (auto p : d.pre[t]) b.arc(place_id(p), id);
    for (auto p : d.post[t]) b.arc(id, place_id(p));
  }
  return b.build();
}

}  // namespace pql
