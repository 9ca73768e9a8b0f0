def maxElem(n: list[int], floor: int) -> int:
    best = floor
    for x in n:
        if x > best:
            best = x
    return best
