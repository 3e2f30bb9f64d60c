// Regenerates the bundled synthetic corpus under data/synthetic/: twelve
// transcripts of a moka-coffee task, recorded completions keyed by prompt
// hash, the bigram scorer corpus, the ground-truth graph and a ready-to-use
// fixture configuration.
//
//   corpusgen [output-dir]           (default: data/synthetic)

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskgraph/fixtures.hpp"
#include "taskgraph/graph.hpp"
#include "taskgraph/serialization.hpp"
#include "taskgraph/summarize.hpp"

namespace {

using namespace taskgraph;
using nlohmann::json;

constexpr const char* kTask = "brew moka coffee";

// Step phrasings. The two fill-water and pour phrasings are lexically close
// (trigram cosine ~0.85) but below the 0.9 clique threshold, and never
// co-occur in one video, so they exercise the cluster-merge path. The two
// add-coffee phrasings sit above 0.9 and stay one clique.
constexpr const char* kFillA = "Fill the water chamber of the pot.";
constexpr const char* kFillB = "Fill the water tank of the pot.";
constexpr const char* kCoffee1 = "Add ground coffee to the filter basket.";
constexpr const char* kCoffee2 = "Add the ground coffee to the filter basket.";
constexpr const char* kAssemble = "Screw the top chamber onto the base.";
constexpr const char* kStove = "Place the pot on the stove.";
constexpr const char* kGurgle = "Wait for the coffee to gurgle.";
constexpr const char* kPour1 = "Pour the coffee into a cup.";
constexpr const char* kPour2 = "Pour the coffee into your cup.";

const std::vector<std::string> kTranscriptBodies = {
    "hey everyone welcome back to the channel today we are making stovetop "
    "espresso with the classic moka pot so first things first you want to get "
    "water in there up to the little valve then your coffee goes in level it "
    "off no tamping screw it all together nice and snug medium heat and just "
    "wait you will hear it start to bubble and sputter that is your cue then "
    "serve it up",
    "so i picked up this moka pot at a flea market and people keep asking how "
    "to use it the coffee goes in the little basket first in my routine "
    "actually before the water some folks do water first either way works "
    "then twist the two halves together put it over the flame listen for the "
    "gurgling sound and when it is done pour yourself a cup",
    "quick moka tutorial no talking just steps water up to the valve line "
    "grounds in the basket assemble the pot burner on medium wait for the "
    "gurgle pour and enjoy that is really all there is to it thanks for "
    "watching",
    "my grandmother taught me this method she always said start with the "
    "coffee fill that basket generously then the water then screw the top on "
    "tight so no steam escapes onto the stove it goes and you stand there and "
    "listen for the song of the pot when it sings your coffee is ready to "
    "pour",
    "a lot of people mess up moka coffee by rushing it so here is the patient "
    "way fill with water add your grounds assemble place on a low flame and "
    "do not walk away the moment you hear that gurgling noise take it off and "
    "pour immediately otherwise it burns",
    "welcome to coffee basics episode three the moka pot step one is always "
    "water in the base step two coffee in the funnel step three screw on the "
    "top step four onto the stove step five wait for the noise step six pour "
    "and taste",
    "today i am reviewing this little aluminum pot and showing how i brew "
    "with it i start by filling the tank with fresh cold water then i spoon "
    "the grounds into the basket screw the upper half on set it on the "
    "smallest burner and wait for that unmistakable gurgle then i pour it "
    "slowly",
    "this is the fastest way to real coffee in a dorm room trust me grounds "
    "first for me then water in the tank twist it shut hot plate on medium "
    "wait a couple minutes until it gurgles and pour it into your mug before "
    "class",
    "in this video i compare italian and cuban styles but the basic brewing "
    "is the same fill the tank add the coffee assemble heat wait for the "
    "gurgle and pour the cuban style just adds whipped sugar at the end",
    "my camping setup includes a tiny moka pot here is the routine at the "
    "campsite coffee into the basket water into the tank screw it together "
    "set it on the camp stove listen for the bubbling gurgle and pour it "
    "into the tin cup best coffee outdoors",
    "as a barista people are surprised i drink moka coffee at home the trick "
    "is good technique fill the tank only to the valve add freshly ground "
    "coffee without tamping assemble firmly moderate heat pull it off right "
    "at the first gurgle and pour",
    "final video of the week a lazy sunday brew coffee goes in the water "
    "goes in the pot gets assembled the stove does its thing i wait for the "
    "gurgling to peak and then i pour it into my favorite mug and relax",
};

struct VideoPlan {
  std::string video_id;
  std::vector<std::string> steps;  // in performed order
  std::string marker;              // "n." / "-" / "*" / "n)"
};

std::string render_completion(const VideoPlan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (plan.marker == "-" || plan.marker == "*") {
      out += plan.marker + " " + plan.steps[i];
    } else if (plan.marker == "n)") {
      out += std::to_string(i + 1) + ") " + plan.steps[i];
    } else {
      out += std::to_string(i + 1) + ". " + plan.steps[i];
    }
    out += "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir =
      argc > 1 ? argv[1] : "data/synthetic";

  std::vector<VideoPlan> plans;
  for (int v = 1; v <= 12; ++v) {
    VideoPlan plan;
    plan.video_id = "v" + std::string(v < 10 ? "0" : "") + std::to_string(v);
    const bool odd = v % 2 == 1;
    const std::string fill = v <= 6 ? kFillA : kFillB;
    const std::string coffee = odd ? kCoffee1 : kCoffee2;
    const std::string pour = odd ? kPour1 : kPour2;
    if (odd) {
      plan.steps = {fill, coffee, kAssemble, kStove, kGurgle, pour};
    } else {
      plan.steps = {coffee, fill, kAssemble, kStove, kGurgle, pour};
    }
    plan.marker = "n.";
    if (v == 3) plan.marker = "-";
    if (v == 8) plan.marker = "*";
    if (v == 5) plan.marker = "n)";
    plans.push_back(std::move(plan));
  }

  std::vector<Transcript> transcripts;
  json completions = json::object();
  const SummarizeConfig summarize_config;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    Transcript t{kTask, plans[i].video_id, kTranscriptBodies[i]};
    const Prompt prompt = build_prompt(t.task_name, t.text, summarize_config);
    completions[FixtureCompletionProvider::prompt_hash(prompt)] =
        render_completion(plans[i]);
    transcripts.push_back(std::move(t));
  }

  // Bigram corpus: the canonical ordering, so sequences performing fill
  // before coffee outscore the reverse.
  std::string corpus;
  corpus += std::string("1. ") + kFillA + " 2. " + kCoffee1 + " 3. " +
            kAssemble + " 4. " + kStove + " 5. " + kGurgle + " 6. " + kPour1 +
            "\n";

  // Ground truth over the final cluster ids (1 fill, 2 coffee, 3 assemble,
  // 4 stove, 5 gurgle, 6 pour).
  std::vector<DnfPrecondition> preconditions = {
      normalize_dnf(3, {{1, 2}}),
      normalize_dnf(4, {{3}}),
      normalize_dnf(5, {{4}}),
      normalize_dnf(6, {{5}}),
  };
  // labels match the medoids the cluster stage settles on
  const TaskGraph truth = consolidate_graph(
      preconditions, {kFillA, kCoffee2, kAssemble, kStove, kGurgle, kPour1});

  const json config = {
      {"provider",
       {{"kind", "fixture"},
        {"fixture_completions",
         (out_dir / "fixtures" / "completions.json").string()},
        {"lm_corpus", (out_dir / "lm_corpus.txt").string()}}},
  };

  write_text_file(out_dir / "transcripts.json",
                  canonical_dump(transcripts_to_json(transcripts)));
  write_text_file(out_dir / "fixtures" / "completions.json",
                  canonical_dump(completions));
  write_text_file(out_dir / "lm_corpus.txt", corpus);
  write_text_file(out_dir / "ground_truth.json",
                  canonical_dump(graph_to_json(truth)));
  write_text_file(out_dir / "config.json", canonical_dump(config));

  std::cout << "wrote synthetic corpus under " << out_dir.string() << "\n";
  return 0;
}
