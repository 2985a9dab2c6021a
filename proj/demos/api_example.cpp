// Builds a render plan in code: twelve events from a hand-made table,
// the "default" preset with a slow tremolo, stereo output.
#include <iostream>
#include <numbers>

#include "sonify/sonify.hpp"

int main(int argc, char** argv) {
  using namespace sonify;
  const std::string out = argc > 1 ? argv[1] : "api_example.wav";

  Table table;
  std::vector<double> when, height, side;
  for (int i = 0; i < 12; ++i) {
    when.push_back(i);
    height.push_back((i * 7) % 12);
    side.push_back(i % 2);
  }
  table.add_column("when", when);
  table.add_column("height", height);
  table.add_column("side", side);

  const std::vector<Mapping> mappings{
      {ParameterId::time, "when", MapLimits::percentiles(0, 100, 0, 0.9)},
      {ParameterId::pitch, "height"},
      {ParameterId::azimuth, "side",
       MapLimits::data_units(0, 1, std::numbers::pi / 4, 7 * std::numbers::pi / 4)}};

  try {
    auto preset = merge_overrides(load_preset("default"),
                                  Json{{"volume_lfo.use", true}, {"volume", 0.3}});
    const std::vector<std::string> chords{"C4,E4,G4,B4", "A3,C4,E4,G4"};
    RenderPlan plan{build_event_set(table, mappings), ScoreSpec(ChordSequence::parse(chords), 6.0),
                    compile(preset), make_bank("stereo"), 44100.0, 11, nullptr,
                    default_event_hold, 0};
    const auto result = render(plan);
    write_wav(result.audio, out);
    std::cout << "wrote " << out << ": " << result.notes.size() << " notes, clip_count "
              << result.clip_count << "\n";
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
