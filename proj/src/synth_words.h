#pragma once

#include <string_view>

namespace depositlag::detail {

// Title vocabulary for synthetic corpora. A few entries carry diacritics so
// that accent folding is exercised.
inline constexpr std::string_view kTitleWords[] = {
    "adaptive", "analysis", "approach", "assessment", "asymmetric", "atmospheric", "bayesian", "behaviour",
    "benchmark", "biological", "boundary", "calibration", "carbon", "cellular", "change", "channel",
    "climate", "clinical", "cognitive", "coherent", "collective", "comparative", "complex", "compliance",
    "computational", "conditions", "constraints", "continuous", "control", "correlation", "coupled", "crystal",
    "cultural", "data", "decay", "decision", "deep", "density", "deposition", "design", "detection",
    "development", "diffusion", "digital", "discrete", "disease", "distributed", "dynamics", "ecological",
    "economic", "effects", "efficient", "elastic", "electron", "emission", "empirical", "energy", "ensemble",
    "entropy", "environment", "estimation", "evaluation", "evidence", "evolution", "experimental", "exposure",
    "field", "flow", "fluid", "framework", "frequency", "function", "gene", "genetic", "geometry", "global",
    "gradient", "graph", "growth", "health", "heat", "heterogeneous", "hierarchical", "historical", "human",
    "hybrid", "identification", "imaging", "impact", "inference", "information", "infrared", "integrated",
    "interaction", "interface", "inverse", "kinetic", "landscape", "language", "large", "lattice", "layer",
    "learning", "linear", "local", "magnetic", "management", "mapping", "market", "measurement", "mechanism",
    "memory", "metabolic", "method", "microbial", "migration", "mobile", "model", "molecular", "monitoring",
    "multiscale", "network", "neural", "noise", "nonlinear", "novel", "numerical", "observation", "ocean",
    "open", "optical", "optimal", "organic", "oscillation", "particle", "pattern", "performance", "phase",
    "physical", "policy", "population", "prediction", "pressure", "probabilistic", "process", "protein",
    "quantum", "radiation", "random", "reaction", "recognition", "regional", "regulation", "reliability",
    "remote", "repository", "resilience", "resolution", "response", "risk", "robust", "rural", "sampling",
    "scalable", "scattering", "sediment", "selection", "semantic", "sensor", "sequence", "signal", "simulation",
    "social", "soil", "solar", "spatial", "spectral", "stability", "statistical", "stochastic", "storage",
    "stress", "structural", "study", "surface", "sustainable", "synthesis", "system", "temperature",
    "temporal", "theory", "thermal", "tissue", "topology", "transport", "treatment", "trends", "turbulence",
    "uncertainty", "urban", "validation", "variability", "vascular", "velocity", "water", "wave", "wireless",
    "café", "naïve", "façade", "résumé", "über", "ångström", "señal", "élan", "déjà", "coöperative",
    "rôle", "crème", "fiancé", "piñata", "smörgåsbord", "jalapeño", "über-scale", "protégé",
};

inline constexpr std::string_view kGivenNames[] = {
    "Ada", "Alan", "Amélie", "Anders", "Anna", "Björn", "Carlos", "Chen", "Chloé", "Daniel", "Drahomira",
    "Elena", "Emil", "François", "Grace", "Hana", "Ingrid", "Ivan", "Jürgen", "Karin", "Kofi", "Lars",
    "Lucía", "Maria", "Mateo", "Mei", "Nadia", "Olga", "Omar", "Petr", "Priya", "Rafael", "Sofia", "Søren",
    "Tomás", "Yuki", "Zoë",
};

// Single-token family names; the raw-name fallback takes the last token.
inline constexpr std::string_view kFamilyNames[] = {
    "Abbott", "Bianchi", "Brown", "Chowdhury", "Dvořák", "Eriksson", "Fernández", "García", "Gómez",
    "Herrmannova", "Ibáñez", "Jansen", "Kowalski", "Knoth", "Lefèvre", "Lovelace", "Martín", "Mäkinen",
    "Müller", "Nakamura", "Novák", "Núñez", "O'Brien", "Øberg", "Pereira", "Petrović", "Quinn", "Rossi",
    "Schäfer", "Schmidt", "Smith", "Søndergaard", "Tanaka", "Thompson", "Ulrich", "Varga", "Wang", "Weiß",
    "Wójcik", "Xu", "Yılmaz", "Zhang", "Łukasiewicz", "Ó_Súilleabháin",
};

inline constexpr std::string_view kSubjectLabels[] = {
    "Agricultural and Biological Sciences", "Arts and Humanities", "Biochemistry, Genetics and Molecular Biology",
    "Business, Management and Accounting", "Chemical Engineering", "Chemistry", "Computer Science",
    "Decision Sciences", "Design", "Earth and Planetary Sciences", "Economics, Econometrics and Finance",
    "Energy", "Engineering", "Environmental Science", "Immunology and Microbiology", "Linguistics",
    "Materials Science", "Mathematics", "Medicine and Dentistry", "Neuroscience", "Nursing and Health Professions",
    "Pharmacology, Toxicology and Pharmaceutical Science", "Philosophy", "Physics and Astronomy", "Psychology",
    "Social Sciences", "Sports and Recreations", "Unspecified", "Veterinary Science and Veterinary Medicine",
};

}  // namespace depositlag::detail
