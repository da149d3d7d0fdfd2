// Regenerates the bundled demo corpus under data/demo/ from the generator
// presets. Run from the repository root after changing presets:
//
//   build/tools/tna-make-demo [corpus_seed] [presets_dir] [out_dir]

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "tna/pipeline.hpp"
#include "tna/synth.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = tna::kDemoCorpusSeed;
    std::string presets_dir = "data/presets";
    std::string out_dir = "data/demo";
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) presets_dir = argv[2];
    if (argc > 3) out_dir = argv[3];

    try {
        const tna::DemoCorpus corpus = tna::build_demo_corpus(seed, presets_dir);

        std::ostringstream fixations;
        tna::write_fixation_csv(fixations, corpus.fixations);
        tna::write_text_file(out_dir + "/demo_fixations.csv", fixations.str());

        std::ostringstream map;
        tna::write_aoi_map(map, corpus.aoi_map);
        tna::write_text_file(out_dir + "/demo_aoi_map.txt", map.str());

        std::ostringstream stages;
        tna::write_stage_annotations(stages, corpus.stages);
        tna::write_text_file(out_dir + "/demo_stages.csv", stages.str());

        std::cout << "wrote " << corpus.fixations.size() << " fixations for "
                  << corpus.stages.size() / 2 << " sessions (seed " << seed << ") to "
                  << out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
