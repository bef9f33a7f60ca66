"""Dynamic network embeddings via retrofitting and linear transformations."""
