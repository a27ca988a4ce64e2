// Categories are part of the API contract; the lexicon assigns one of
// these to every concept.
export const CATEGORIES = [
    "brain_disease",
    "cognitive_function",
    "medicine",
    "brain_region",
    "neuron",
    "gene_protein",
    "pathway",
    "neurotransmitter",
];
//# sourceMappingURL=context.js.map