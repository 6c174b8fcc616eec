import concurrent.futures as cf
from threading import BoundedSemaphore
from typing import Any, Callable, Iterable, List, Optional


class BoundedExecutor:
    """BoundedExecutor behaves as a ThreadPoolExecutor which will block on
    calls to submit() once the limit given as "bound" work items are queued.
    Replications of an experiment are submitted through it so that at most
    bound + max_workers of them hold their datasets in memory at once.
    :param bound: Integer - the maximum number of items in the work queue
    :param max_workers: Integer - the size of the thread pool
    """

    def __init__(self, bound: int, max_workers: int) -> None:
        self.executor = cf.ThreadPoolExecutor(max_workers=max_workers)
        self.semaphore = BoundedSemaphore(bound + max_workers)

    def submit(self, fn: Callable, *args, **kwargs) -> cf.Future:
        """See concurrent.futures.Executor#submit"""
        self.semaphore.acquire()
        try:
            future = self.executor.submit(fn, *args, **kwargs)
        except Exception:
            self.semaphore.release()
            raise
        future.add_done_callback(lambda _: self.semaphore.release())
        return future

    def map_ordered(
        self,
        fn: Callable[[Any], Any],
        items: Iterable[Any],
        on_result: Optional[Callable[[Any], None]] = None,
    ) -> List[Any]:
        """
        Applies ``fn`` to every item and returns the results in item order,
        whatever order the workers finish in. ``on_result`` runs on the calling
        thread as each result arrives.
        """
        futures = {}
        for i, item in enumerate(items):
            futures[self.submit(fn, item)] = i
        results: List[Any] = [None] * len(futures)
        for future in cf.as_completed(futures):
            res = future.result()
            results[futures[future]] = res
            if on_result is not None:
                on_result(res)
        return results

    def shutdown(self, wait: bool = True) -> None:
        """See concurrent.futures.Executor#shutdown"""
        self.executor.shutdown(wait)

    def __enter__(self) -> "BoundedExecutor":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown(wait=True)
