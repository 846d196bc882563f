from src.cover.double_cover import (
    apply_cover,
    deck_transform,
    directors_of_tensor,
    pairing_xi,
)

__all__ = ["apply_cover", "deck_transform", "directors_of_tensor", "pairing_xi"]
