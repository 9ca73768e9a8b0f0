def linearSearch(n: list[int], target: int) -> int:
    for i in range(len(n)):
        if n[i] == target:
            return i
    return -1
