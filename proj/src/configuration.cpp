#include "quermass/configuration.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace quermass {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Configuration::Configuration(Rect window, double r_max_bound, double margin)
    : window_(window), r_max_(r_max_bound > 0 ? r_max_bound : 1.0) {
  if (margin < 0) margin = 2.0 * r_max_;
  grid_.reset(window_.expanded(margin), 2.0 * r_max_);
}

double Configuration::r_min_present() const {
  double m = r_max_;
  for (const Disk& d : disks_) m = std::min(m, d.r);
  return m;
}

int Configuration::add(const Disk& d) {
  const int id = static_cast<int>(disks_.size());
  disks_.push_back(d);
  grid_.insert(id, d.center());
  return id;
}

int Configuration::remove_swap(int i) {
  const int last = static_cast<int>(disks_.size()) - 1;
  grid_.remove(i, disks_[static_cast<std::size_t>(i)].center());
  if (i != last) {
    grid_.remove(last, disks_[static_cast<std::size_t>(last)].center());
    disks_[static_cast<std::size_t>(i)] = disks_[static_cast<std::size_t>(last)];
    grid_.insert(i, disks_[static_cast<std::size_t>(i)].center());
  }
  disks_.pop_back();
  return i == last ? -1 : last;
}

void Configuration::move(int i, Vec2 new_germ) {
  Disk& d = disks_[static_cast<std::size_t>(i)];
  grid_.remove(i, d.center());
  d.x = new_germ.x;
  d.y = new_germ.y;
  grid_.insert(i, d.center());
}

void Configuration::neighbors_within(Vec2 p, double radius, std::vector<int>& out) const {
  grid_.query(p, radius, scratch_);
  out.clear();
  const double r2 = radius * radius;
  for (int id : scratch_) {
    const Disk& d = disks_[static_cast<std::size_t>(id)];
    const double dx = d.x - p.x, dy = d.y - p.y;
    if (dx * dx + dy * dy <= r2) out.push_back(id);
  }
}

std::string Configuration::to_json(const std::vector<int>* types) const {
  std::ostringstream os;
  os << "{\"window\": [" << fmt17(window_.x0) << ", " << fmt17(window_.y0) << ", "
     << fmt17(window_.x1) << ", " << fmt17(window_.y1) << "], \"points\": [";
  for (std::size_t i = 0; i < disks_.size(); ++i) {
    if (i) os << ", ";
    os << "[" << fmt17(disks_[i].x) << ", " << fmt17(disks_[i].y) << ", " << fmt17(disks_[i].r)
       << "]";
  }
  os << "]";
  if (types && !types->empty()) {
    os << ", \"types\": [";
    for (std::size_t i = 0; i < types->size(); ++i) {
      if (i) os << ", ";
      os << (*types)[i];
    }
    os << "]";
  }
  os << "}";
  return os.str();
}

Configuration Configuration::from_json(const std::string& text, std::vector<int>* types) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const auto& w = j.at("window");
  Rect window{w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>(),
              w.at(3).get<double>()};
  double r_max = 0.0;
  for (const auto& p : j.at("points")) r_max = std::max(r_max, p.at(2).get<double>());
  Configuration config(window, r_max > 0 ? r_max : 1.0);
  for (const auto& p : j.at("points"))
    config.add({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
  if (types) {
    types->clear();
    if (j.contains("types"))
      for (const auto& t : j.at("types")) types->push_back(t.get<int>());
  }
  return config;
}

std::string Configuration::to_csv() const {
  std::ostringstream os;
  os << "x,y,r\n";
  for (const Disk& d : disks_)
    os << fmt17(d.x) << "," << fmt17(d.y) << "," << fmt17(d.r) << "\n";
  return os.str();
}

Configuration Configuration::from_csv(const std::string& text, Rect window, double r_max_bound) {
  Configuration config(window, r_max_bound);
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    Disk d;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &d.x, &d.y, &d.r) == 3) config.add(d);
  }
  return config;
}

}  // namespace quermass
